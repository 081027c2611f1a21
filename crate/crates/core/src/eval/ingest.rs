use std::collections::BTreeSet;
use std::io::Read;

use super::{EvalError, PreferenceRecord, RatingRecord};
use crate::eval::Emotion;

pub const RATING_HEADER: [&str; 7] = [
    "rater_id",
    "sample_id",
    "condition",
    "true_emotion",
    "chosen_emotion",
    "nmos",
    "emos",
];

pub const PREFERENCE_HEADER: [&str; 6] = ["rater_id", "emotion", "rank1", "rank2", "rank3", "rank4"];

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input)
}

fn check_header<R: Read>(rdr: &mut csv::Reader<R>, expected: &[&str]) -> Result<(), EvalError> {
    let header = rdr.headers().map_err(|e| EvalError::Parse {
        line: 1,
        reason: e.to_string(),
    })?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(EvalError::Parse {
            line: 1,
            reason: format!("expected header `{}`", expected.join(",")),
        });
    }
    Ok(())
}

fn records<R: Read>(
    rdr: &mut csv::Reader<R>,
    width: usize,
) -> impl Iterator<Item = Result<(u64, csv::StringRecord), EvalError>> + '_ {
    rdr.records().map(move |r| {
        let rec = r.map_err(|e| EvalError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            reason: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != width {
            return Err(EvalError::Parse {
                line,
                reason: format!("expected {width} fields, found {}", rec.len()),
            });
        }
        Ok((line, rec))
    })
}

fn field<T: std::str::FromStr>(line: u64, name: &str, value: &str) -> Result<T, EvalError> {
    value.parse().map_err(|_| EvalError::Parse {
        line,
        reason: format!("invalid {name} `{value}`"),
    })
}

fn score(line: u64, name: &str, value: &str) -> Result<u8, EvalError> {
    let v: u8 = field(line, name, value)?;
    if !(1..=5).contains(&v) {
        return Err(EvalError::Parse {
            line,
            reason: format!("{name} {v} outside 1..=5"),
        });
    }
    Ok(v)
}

/// Parses the ratings CSV
/// (`rater_id,sample_id,condition,true_emotion,chosen_emotion,nmos,emos`).
pub fn parse_ratings<R: Read>(input: R) -> Result<Vec<RatingRecord>, EvalError> {
    let mut rdr = reader(input);
    check_header(&mut rdr, &RATING_HEADER)?;
    records(&mut rdr, RATING_HEADER.len())
        .map(|r| {
            let (line, rec) = r?;
            Ok(RatingRecord {
                rater_id: rec[0].to_string(),
                sample_id: rec[1].to_string(),
                condition: field(line, "condition", &rec[2])?,
                true_emotion: field(line, "true_emotion", &rec[3])?,
                chosen_emotion: field(line, "chosen_emotion", &rec[4])?,
                nmos: score(line, "nmos", &rec[5])?,
                emos: score(line, "emos", &rec[6])?,
            })
        })
        .collect()
}

/// Parses the preference CSV (`rater_id,emotion,rank1,rank2,rank3,rank4`).
/// A ranking that repeats a variant is rejected.
pub fn parse_preferences<R: Read>(input: R) -> Result<Vec<PreferenceRecord>, EvalError> {
    let mut rdr = reader(input);
    check_header(&mut rdr, &PREFERENCE_HEADER)?;
    records(&mut rdr, PREFERENCE_HEADER.len())
        .map(|r| {
            let (line, rec) = r?;
            let emotion: Emotion = field(line, "emotion", &rec[1])?;
            if !matches!(emotion, Emotion::Happy | Emotion::Sad) {
                return Err(EvalError::Parse {
                    line,
                    reason: format!("preference emotion must be happy or sad, got {emotion}"),
                });
            }
            let ranking: [String; 4] = std::array::from_fn(|i| rec[2 + i].to_string());
            let distinct: BTreeSet<&str> = ranking.iter().map(String::as_str).collect();
            if distinct.len() != 4 || distinct.contains("") {
                return Err(EvalError::Parse {
                    line,
                    reason: "ranking must list four distinct variants".into(),
                });
            }
            Ok(PreferenceRecord {
                rater_id: rec[0].to_string(),
                emotion,
                ranking,
            })
        })
        .collect()
}
