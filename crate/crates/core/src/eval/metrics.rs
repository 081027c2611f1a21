use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use super::{Condition, Emotion, EvalError, PreferenceRecord, RatingRecord};

/// z for a two-sided 95% normal interval.
const Z95: f64 = 1.96;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MosField {
    Nmos,
    Emos,
}

impl MosField {
    fn of(self, r: &RatingRecord) -> u8 {
        match self {
            MosField::Nmos => r.nmos,
            MosField::Emos => r.emos,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MosField::Nmos => "nMOS",
            MosField::Emos => "eMOS",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupBy {
    /// Pool all emotions of a condition.
    Condition,
    ConditionEmotion,
}

/// An aggregation cell; `emotion` is `None` when pooled over emotions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Group {
    pub condition: Condition,
    pub emotion: Option<Emotion>,
}

impl Group {
    fn of(r: &RatingRecord, by: GroupBy) -> Group {
        Group {
            condition: r.condition,
            emotion: match by {
                GroupBy::Condition => None,
                GroupBy::ConditionEmotion => Some(r.true_emotion),
            },
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.emotion {
            Some(e) => write!(f, "{}/{}", self.condition, e),
            None => write!(f, "{}/all", self.condition),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MosSummary {
    pub n: usize,
    pub mean: f64,
    /// Half-width of the 95% interval, `1.96 · s / √n` with the sample
    /// standard deviation `s` (0 for a single rating).
    pub ci95: f64,
}

impl MosSummary {
    pub fn from_scores(scores: &[u8]) -> Option<MosSummary> {
        if scores.is_empty() {
            return None;
        }
        let n = scores.len() as f64;
        let sum: u64 = scores.iter().map(|&s| s as u64).sum();
        let mean = sum as f64 / n;
        let sd = if scores.len() > 1 {
            let ss: f64 = scores.iter().map(|&s| (s as f64 - mean).powi(2)).sum();
            (ss / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Some(MosSummary {
            n: scores.len(),
            mean,
            ci95: Z95 * sd / n.sqrt(),
        })
    }
}

fn grouped(records: &[RatingRecord], by: GroupBy) -> Result<BTreeMap<Group, Vec<&RatingRecord>>, EvalError> {
    if records.is_empty() {
        return Err(EvalError::EmptyGroup("rating set".into()));
    }
    let mut groups: BTreeMap<Group, Vec<&RatingRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(Group::of(r, by)).or_default().push(r);
    }
    Ok(groups)
}

/// Mean and CI per group. Groups without records are absent from the map.
pub fn mos(
    records: &[RatingRecord],
    field: MosField,
    by: GroupBy,
) -> Result<BTreeMap<Group, MosSummary>, EvalError> {
    Ok(grouped(records, by)?
        .into_iter()
        .map(|(g, rs)| {
            let scores: Vec<u8> = rs.iter().map(|r| field.of(r)).collect();
            (g, MosSummary::from_scores(&scores).expect("groups are non-empty"))
        })
        .collect())
}

/// Fraction of trials where the chosen emotion matches the true one. With
/// [`GroupBy::Condition`] this is the pooled (micro) figure.
pub fn accuracy(records: &[RatingRecord], by: GroupBy) -> Result<BTreeMap<Group, f64>, EvalError> {
    Ok(grouped(records, by)?
        .into_iter()
        .map(|(g, rs)| {
            let correct = rs.iter().filter(|r| r.chosen_emotion == r.true_emotion).count();
            (g, correct as f64 / rs.len() as f64)
        })
        .collect())
}

/// Unweighted mean of the per-emotion accuracies present for each condition.
pub fn macro_accuracy(records: &[RatingRecord]) -> Result<BTreeMap<Condition, f64>, EvalError> {
    let per = accuracy(records, GroupBy::ConditionEmotion)?;
    let mut sums: BTreeMap<Condition, (f64, usize)> = BTreeMap::new();
    for (g, acc) in per {
        let e = sums.entry(g.condition).or_insert((0.0, 0));
        e.0 += acc;
        e.1 += 1;
    }
    Ok(sums.into_iter().map(|(c, (s, n))| (c, s / n as f64)).collect())
}

/// Rows are the true emotion, columns the chosen one, in [`Emotion::ALL`] order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub counts: [[u64; 4]; 4],
}

impl ConfusionMatrix {
    pub fn row_total(&self, e: Emotion) -> u64 {
        self.counts[e.index()].iter().sum()
    }

    /// Row-normalized; rows without trials stay zero.
    pub fn normalized(&self) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for (i, row) in self.counts.iter().enumerate() {
            let total: u64 = row.iter().sum();
            if total > 0 {
                for (j, &c) in row.iter().enumerate() {
                    out[i][j] = c as f64 / total as f64;
                }
            }
        }
        out
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("{:>8}", "true\\chosen");
        for e in Emotion::ALL {
            write!(out, "{:>8}", e.name()).unwrap();
        }
        out.push('\n');
        for e in Emotion::ALL {
            write!(out, "{:>11}", e.name()).unwrap();
            for c in self.counts[e.index()] {
                write!(out, "{c:>8}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

pub fn confusion(records: &[RatingRecord], condition: Condition) -> ConfusionMatrix {
    let mut m = ConfusionMatrix::default();
    for r in records.iter().filter(|r| r.condition == condition) {
        m.counts[r.true_emotion.index()][r.chosen_emotion.index()] += 1;
    }
    m
}

#[derive(Clone, Debug, PartialEq)]
pub struct PreferenceHistogram {
    pub emotion: Emotion,
    pub n: usize,
    /// Sorted variant identifiers.
    pub variants: Vec<String>,
    /// `fractions[v][k]`: share of raters who put `variants[v]` at rank `k + 1`.
    pub fractions: Vec<[f64; 4]>,
}

impl PreferenceHistogram {
    pub fn fraction(&self, variant: &str, rank: usize) -> Option<f64> {
        let v = self.variants.iter().position(|x| x == variant)?;
        self.fractions[v].get(rank.checked_sub(1)?).copied()
    }
}

pub fn preference(records: &[PreferenceRecord], emotion: Emotion) -> Result<PreferenceHistogram, EvalError> {
    let rs: Vec<&PreferenceRecord> = records.iter().filter(|r| r.emotion == emotion).collect();
    let first = rs
        .first()
        .ok_or_else(|| EvalError::EmptyGroup(format!("{emotion} preferences")))?;
    let mut variants: Vec<String> = first.ranking.to_vec();
    variants.sort();

    let mut counts = vec![[0u64; 4]; variants.len()];
    for r in &rs {
        let mut sorted = r.ranking.to_vec();
        sorted.sort();
        if sorted != variants {
            return Err(EvalError::InconsistentVariants { emotion });
        }
        for (rank, v) in r.ranking.iter().enumerate() {
            let idx = variants.binary_search(v).expect("checked above");
            counts[idx][rank] += 1;
        }
    }
    let n = rs.len();
    let fractions = counts
        .iter()
        .map(|row| row.map(|c| c as f64 / n as f64))
        .collect();
    Ok(PreferenceHistogram {
        emotion,
        n,
        variants,
        fractions,
    })
}

/// `metric<TAB>condition<TAB>emotion<TAB>n<TAB>mean<TAB>ci95`
pub fn write_mos_report(field: MosField, table: &BTreeMap<Group, MosSummary>) -> String {
    let mut out = String::new();
    for (g, s) in table {
        let emotion = g.emotion.map_or("all", Emotion::name);
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{:.4}\t{:.4}",
            field.name(),
            g.condition,
            emotion,
            s.n,
            s.mean,
            s.ci95
        )
        .unwrap();
    }
    out
}

/// `condition<TAB>emotion<TAB>accuracy` with per-emotion rows followed by
/// `micro` and `macro` rows per condition.
pub fn write_accuracy_report(records: &[RatingRecord]) -> Result<String, EvalError> {
    let per = accuracy(records, GroupBy::ConditionEmotion)?;
    let micro = accuracy(records, GroupBy::Condition)?;
    let macro_ = macro_accuracy(records)?;
    let mut out = String::new();
    for c in Condition::ALL {
        for (g, acc) in per.range(
            Group {
                condition: c,
                emotion: Some(Emotion::Happy),
            }..=Group {
                condition: c,
                emotion: Some(Emotion::Fear),
            },
        ) {
            writeln!(out, "{}\t{}\t{acc:.4}", c, g.emotion.unwrap()).unwrap();
        }
        if let Some(m) = micro.get(&Group {
            condition: c,
            emotion: None,
        }) {
            writeln!(out, "{c}\tmicro\t{m:.4}").unwrap();
        }
        if let Some(m) = macro_.get(&c) {
            writeln!(out, "{c}\tmacro\t{m:.4}").unwrap();
        }
    }
    Ok(out)
}

/// `emotion<TAB>variant<TAB>rank1<TAB>rank2<TAB>rank3<TAB>rank4`
pub fn write_preference_report(h: &PreferenceHistogram) -> String {
    let mut out = String::new();
    for (v, row) in h.variants.iter().zip(&h.fractions) {
        writeln!(
            out,
            "{}\t{}\t{:.4}\t{:.4}\t{:.4}\t{:.4}",
            h.emotion, v, row[0], row[1], row[2], row[3]
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rating(cond: Condition, truth: Emotion, chosen: Emotion, nmos: u8, emos: u8) -> RatingRecord {
        RatingRecord {
            rater_id: "r".into(),
            sample_id: "s".into(),
            condition: cond,
            true_emotion: truth,
            chosen_emotion: chosen,
            nmos,
            emos,
        }
    }

    #[test]
    fn constant_ratings() {
        let rs: Vec<_> = (0..10)
            .map(|_| rating(Condition::FineNV, Emotion::Sad, Emotion::Sad, 4, 4))
            .collect();
        let t = mos(&rs, MosField::Nmos, GroupBy::ConditionEmotion).unwrap();
        let s = t[&Group {
            condition: Condition::FineNV,
            emotion: Some(Emotion::Sad),
        }];
        assert_eq!((s.mean, s.ci95, s.n), (4.0, 0.0, 10));
    }

    #[test]
    fn three_four_five() {
        let s = MosSummary::from_scores(&[3, 4, 5]).unwrap();
        assert_eq!(s.mean, 4.0);
        assert!((s.ci95 - 1.96 / 3f64.sqrt()).abs() < 1e-12);
        assert!((s.ci95 - 1.13).abs() < 0.005);
    }

    #[test]
    fn single_rating_has_zero_ci() {
        let s = MosSummary::from_scores(&[2]).unwrap();
        assert_eq!((s.mean, s.ci95), (2.0, 0.0));
        assert!(MosSummary::from_scores(&[]).is_none());
    }

    #[test]
    fn empty_input() {
        assert!(matches!(mos(&[], MosField::Emos, GroupBy::Condition), Err(EvalError::EmptyGroup(_))));
        assert!(matches!(accuracy(&[], GroupBy::Condition), Err(EvalError::EmptyGroup(_))));
        assert_eq!(confusion(&[], Condition::FineNV), ConfusionMatrix::default());
        assert!(matches!(preference(&[], Emotion::Sad), Err(EvalError::EmptyGroup(_))));
    }

    #[test]
    fn absent_groups_are_absent() {
        let rs = vec![rating(Condition::CoarseNV, Emotion::Happy, Emotion::Sad, 3, 3)];
        let t = mos(&rs, MosField::Emos, GroupBy::ConditionEmotion).unwrap();
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn two_of_eight() {
        let rs: Vec<_> = (0..8)
            .map(|i| {
                let chosen = if i < 2 { Emotion::Fear } else { Emotion::Happy };
                rating(Condition::VerbalOnly, Emotion::Fear, chosen, 3, 3)
            })
            .collect();
        let acc = accuracy(&rs, GroupBy::Condition).unwrap();
        assert_eq!(
            acc[&Group {
                condition: Condition::VerbalOnly,
                emotion: None
            }],
            0.25
        );
    }

    #[test]
    fn micro_vs_macro() {
        // happy 1/1, sad 1/3: micro 2/4, macro (1 + 1/3)/2
        let rs = vec![
            rating(Condition::FineNV, Emotion::Happy, Emotion::Happy, 3, 3),
            rating(Condition::FineNV, Emotion::Sad, Emotion::Sad, 3, 3),
            rating(Condition::FineNV, Emotion::Sad, Emotion::Fear, 3, 3),
            rating(Condition::FineNV, Emotion::Sad, Emotion::Anger, 3, 3),
        ];
        let micro = accuracy(&rs, GroupBy::Condition).unwrap();
        assert_eq!(micro.values().next(), Some(&0.5));
        let macro_ = macro_accuracy(&rs).unwrap();
        assert!((macro_[&Condition::FineNV] - 2.0 / 3.0).abs() < 1e-12);
        let report = write_accuracy_report(&rs).unwrap();
        assert_eq!(
            report,
            "FineNV\thappy\t1.0000\nFineNV\tsad\t0.3333\nFineNV\tmicro\t0.5000\nFineNV\tmacro\t0.6667\n"
        );
    }

    #[test]
    fn confusion_rows() {
        let mut rs: Vec<_> = (0..9)
            .map(|_| rating(Condition::FineNV, Emotion::Happy, Emotion::Happy, 3, 3))
            .collect();
        rs.push(rating(Condition::FineNV, Emotion::Happy, Emotion::Sad, 3, 3));
        rs.push(rating(Condition::VerbalOnly, Emotion::Happy, Emotion::Fear, 3, 3));
        let m = confusion(&rs, Condition::FineNV);
        assert_eq!(m.counts[0], [9, 1, 0, 0]);
        assert_eq!(m.row_total(Emotion::Happy), 10);
        assert_eq!(m.normalized()[0][0], 0.9);
        assert!(m.render_text().contains("happy       9       1       0       0"));
    }

    #[test]
    fn all_correct_is_diagonal() {
        let rs: Vec<_> = Emotion::ALL
            .iter()
            .map(|&e| rating(Condition::FineNV, e, e, 3, 3))
            .collect();
        let m = confusion(&rs, Condition::FineNV);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m.counts[i][j], u64::from(i == j));
            }
        }
    }

    fn pref(emotion: Emotion, ranking: [&str; 4]) -> PreferenceRecord {
        PreferenceRecord {
            rater_id: "r".into(),
            emotion,
            ranking: ranking.map(String::from),
        }
    }

    #[test]
    fn single_preference() {
        let h = preference(&[pref(Emotion::Happy, ["A", "B", "C", "D"])], Emotion::Happy).unwrap();
        assert_eq!(h.fraction("A", 1), Some(1.0));
        assert_eq!(h.fraction("A", 2), Some(0.0));
        assert_eq!(h.fraction("D", 4), Some(1.0));
        assert_eq!(h.fraction("Z", 1), None);
        assert_eq!(
            write_preference_report(&h).lines().next(),
            Some("happy\tA\t1.0000\t0.0000\t0.0000\t0.0000")
        );
    }

    #[test]
    fn inconsistent_variant_sets() {
        let rs = [
            pref(Emotion::Sad, ["A", "B", "C", "D"]),
            pref(Emotion::Sad, ["A", "B", "C", "E"]),
        ];
        assert_eq!(
            preference(&rs, Emotion::Sad),
            Err(EvalError::InconsistentVariants { emotion: Emotion::Sad })
        );
    }
}
