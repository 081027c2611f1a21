use std::collections::BTreeMap;
use std::str::FromStr;

use super::{CorpusError, CorpusManifest};

/// Source range of ingested labels; values are mapped affinely onto `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LabelRange {
    pub lo: f64,
    pub hi: f64,
}

impl LabelRange {
    pub fn rescale(&self, x: f64) -> f64 {
        (x - self.lo) / (self.hi - self.lo)
    }
}

impl FromStr for LabelRange {
    type Err = String;

    /// `lo,hi`, e.g. `-1,1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = s
            .split_once(',')
            .ok_or_else(|| format!("expected `lo,hi`, got `{s}`"))?;
        let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
        let (lo, hi) = (parse(lo)?, parse(hi)?);
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(format!("need finite lo < hi, got {lo},{hi}"));
        }
        Ok(LabelRange { lo, hi })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelReport {
    pub labeled: usize,
    pub unlabeled: usize,
    /// Ids in the label file with no matching record, sorted.
    pub unmatched: Vec<String>,
}

/// Parses `id<TAB>arousal<TAB>valence` lines. Blank lines, `#` comments and
/// an `id<TAB>arousal<TAB>valence` header are skipped.
pub fn parse_labels(text: &str) -> Result<BTreeMap<String, (f64, f64)>, CorpusError> {
    let mut out = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || (idx == 0 && trimmed == "id\tarousal\tvalence") {
            continue;
        }
        let bad = |reason: String| CorpusError::MalformedLabelFile {
            line: idx + 1,
            reason,
        };
        let cols: Vec<&str> = trimmed.split('\t').collect();
        let [id, a, v] = cols.as_slice() else {
            return Err(bad(format!("expected 3 tab-separated columns, found {}", cols.len())));
        };
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| bad(format!("invalid number `{s}`")))
        };
        let pair = (num(a)?, num(v)?);
        if out.insert(id.trim().to_string(), pair).is_some() {
            return Err(bad(format!("duplicate id `{id}`")));
        }
    }
    Ok(out)
}

/// Copies arousal/valence onto matching records. Records without a label
/// keep whatever they had.
pub fn attach_emotion_labels(
    m: &CorpusManifest,
    labels_text: &str,
    range: Option<LabelRange>,
) -> Result<(CorpusManifest, LabelReport), CorpusError> {
    let mut labels = parse_labels(labels_text)?;
    let mut records = m.records.clone();
    let mut report = LabelReport::default();
    for r in &mut records {
        match labels.remove(&r.id) {
            Some((a, v)) => {
                let (a, v) = match range {
                    Some(rg) => (rg.rescale(a), rg.rescale(v)),
                    None => (a, v),
                };
                r.arousal = Some(a);
                r.valence = Some(v);
                report.labeled += 1;
            }
            None => report.unlabeled += 1,
        }
    }
    report.unmatched = labels.into_keys().collect();
    Ok((CorpusManifest::new(records), report))
}
