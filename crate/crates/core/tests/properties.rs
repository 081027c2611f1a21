use std::collections::BTreeSet;

use nvkit::audio::{detect_silence, rms_dbfs, split_on_silence, AudioBuffer, SegmentationParams};
use nvkit::eval::{
    accuracy, confusion, mos, preference, Condition, Emotion, GroupBy, MosField, PreferenceRecord,
    RatingRecord,
};
use nvkit::grammar::{coarsen_text, Element, TranscriptBuilder, UnitLexeme};
use nvkit::lexicon::Lexicon;
use nvkit::semantics::{count_discrete, encode_tag, unit_duration, ELONGATION_STEP};
use nvkit::{encode_tokens, parse_transcript, serialize, to_coarse, GrammarError, NvStyle, TokenStream, UnitKind};
use proptest::prelude::*;

fn lexicon() -> Lexicon {
    Lexicon::default()
}

fn style() -> impl Strategy<Value = NvStyle> {
    prop::sample::select(NvStyle::ALL.to_vec())
}

/// (style, units) drawn from the default lexicon.
fn tag() -> impl Strategy<Value = (NvStyle, Vec<UnitLexeme>)> {
    style().prop_flat_map(|s| {
        let entries = lexicon().entries(s).to_vec();
        let unit = (prop::sample::select(entries), 0usize..=10).prop_map(|(e, el)| UnitLexeme::new(e.base, el));
        (Just(s), prop::collection::vec(unit, 1..6))
    })
}

fn verbal() -> impl Strategy<Value = String> {
    prop::collection::vec("[a-zA-Z']{1,8}", 1..5).prop_map(|w| w.join(" "))
}

#[derive(Clone, Debug)]
enum Part {
    Tag(NvStyle, Vec<UnitLexeme>),
    Verbal(String),
}

fn transcript_parts() -> impl Strategy<Value = Vec<Part>> {
    prop::collection::vec(
        prop_oneof![
            tag().prop_map(|(s, u)| Part::Tag(s, u)),
            verbal().prop_map(Part::Verbal)
        ],
        0..5,
    )
}

/// Writes parts as text with random casing and padding.
fn noisy_text(parts: &[Part], upper: &[bool], pad: &[usize]) -> String {
    let mut out = String::new();
    for (i, p) in parts.iter().enumerate() {
        let sp = " ".repeat(pad[i % pad.len()]);
        match p {
            Part::Tag(s, units) => {
                let name = if upper[i % upper.len()] {
                    s.canonical_name().to_uppercase()
                } else {
                    s.canonical_name().to_string()
                };
                let words: Vec<String> = units
                    .iter()
                    .enumerate()
                    .map(|(k, u)| {
                        if upper[(i + k) % upper.len()] {
                            u.surface.to_uppercase()
                        } else {
                            u.surface.clone()
                        }
                    })
                    .collect();
                out.push_str(&format!("{sp}<{sp}({sp}{name}{sp}) {}{sp}>", words.join(&format!(" {sp}"))));
            }
            Part::Verbal(v) => out.push_str(&format!(" {sp}{v}{sp} ")),
        }
    }
    out
}

fn build(parts: &[Part]) -> nvkit::AnnotatedTranscript {
    let mut b = TranscriptBuilder::new();
    for p in parts {
        b = match p {
            Part::Tag(s, u) => b.tag(*s, u.clone()),
            Part::Verbal(v) => b.verbal(v),
        };
    }
    b.build()
}

proptest! {
    #[test]
    fn parse_serialize_round_trip(
        parts in transcript_parts(),
        upper in prop::collection::vec(any::<bool>(), 1..8),
        pad in prop::collection::vec(0usize..3, 1..8),
    ) {
        let lex = lexicon();
        let text = noisy_text(&parts, &upper, &pad);
        let parsed = parse_transcript(&text, &lex).unwrap();
        let canonical = serialize(&parsed);
        let reparsed = parse_transcript(&canonical, &lex).unwrap();
        prop_assert_eq!(&reparsed, &parsed);
        prop_assert_eq!(serialize(&reparsed), canonical.clone());
        // verbal segments never merge across tags, so structure survives
        prop_assert_eq!(parsed.tags.len(), parts.iter().filter(|p| matches!(p, Part::Tag(..))).count());
        // the builder produces the same canonical text
        let built = build(&parts);
        prop_assert_eq!(&built.source, &serialize(&built));
    }

    #[test]
    fn spans_tile_source(parts in transcript_parts(), pad in prop::collection::vec(0usize..3, 1..8)) {
        let lex = lexicon();
        let text = noisy_text(&parts, &[false], &pad);
        let t = parse_transcript(&text, &lex).unwrap();
        let mut cursor = 0;
        for e in t.elements() {
            let span = match e { Element::Tag(tag) => tag.span, Element::Verbal(v) => v.span };
            prop_assert!(span.start < span.end);
            prop_assert!(span.start >= cursor);
            prop_assert!(text[cursor..span.start].trim().is_empty());
            cursor = span.end;
        }
        prop_assert!(text[cursor..].trim().is_empty());
    }

    #[test]
    fn random_words_rejected(s in style(), word in "[a-z]{1,10}") {
        let lex = lexicon();
        let known = lex.match_unit(s, &[word.as_str()]).is_some();
        let r = parse_transcript(&format!("<({}) {word}>", s.canonical_name()), &lex);
        if known {
            prop_assert!(r.is_ok());
        } else {
            prop_assert!(
                matches!(r, Err(GrammarError::UnknownUnit { .. })),
                "expected UnknownUnit, got {:?}", r
            );
        }
    }

    #[test]
    fn coarse_removes_units_and_is_idempotent(parts in transcript_parts()) {
        let lex = lexicon();
        let t = build(&parts);
        let coarse = to_coarse(&t);
        prop_assert_eq!(coarsen_text(&t.source, &lex).unwrap(), coarse.clone());
        prop_assert_eq!(coarsen_text(&coarse, &lex).unwrap(), coarse.clone());
        for tag in &t.tags {
            let needle = format!("<{}>", tag.style.canonical_name());
            prop_assert!(coarse.contains(&needle));
        }
        prop_assert!(!coarse.contains('('));
        // dropping tags from both sides leaves identical verbal text
        let verbal: Vec<&str> = t.verbal_segments.iter().map(|v| v.text.as_str()).collect();
        let coarse_verbal: Vec<&str> = coarse
            .split(' ')
            .filter(|w| !w.is_empty() && !w.starts_with('<'))
            .collect();
        let joined = verbal.join(" ");
        let verbal_words: Vec<&str> = joined.split(' ').filter(|w| !w.is_empty()).collect();
        prop_assert_eq!(verbal_words, coarse_verbal);
    }

    #[test]
    fn duration_linearity(e1 in 0usize..=20, e2 in 0usize..=20) {
        let lex = lexicon();
        for entry in lex.iter().filter(|e| e.kind == UnitKind::Continuous) {
            let d = |e| unit_duration(&lex, entry.style, &UnitLexeme::new(entry.base.clone(), e)).unwrap();
            let (lo, hi) = (e1.min(e2), e1.max(e2));
            prop_assert_eq!(d(hi) - d(lo), ELONGATION_STEP * (hi - lo) as u32);
        }
    }

    #[test]
    fn token_invariants((s, units) in tag()) {
        let lex = lexicon();
        let t = TranscriptBuilder::new().tag(s, units.clone()).build();
        let tag = &t.tags[0];
        let tokens = encode_tag(&lex, tag).unwrap();
        // kind exclusivity and positive durations
        for tok in &tokens {
            prop_assert!(tok.kind == UnitKind::Discrete || tok.count == 1);
            prop_assert!(!tok.duration.is_zero());
        }
        // count conservation
        let discrete_units = units
            .iter()
            .filter(|u| lex.get(s, &u.base).unwrap().kind == UnitKind::Discrete)
            .count();
        let token_total: usize = tokens.iter().filter(|t| t.kind == UnitKind::Discrete).map(|t| t.count).sum();
        prop_assert_eq!(token_total, discrete_units);
        prop_assert_eq!(count_discrete(&lex, tag).unwrap().values().sum::<usize>(), discrete_units);
        // order: expanding tokens reproduces the unit base sequence
        let expanded: Vec<&str> = tokens
            .iter()
            .flat_map(|t| std::iter::repeat_n(t.base.as_str(), t.count))
            .collect();
        let bases: Vec<&str> = units.iter().map(|u| u.base.as_str()).collect();
        prop_assert_eq!(expanded, bases);
    }

    #[test]
    fn token_stream_export_round_trip(parts in transcript_parts()) {
        let lex = lexicon();
        let stream = encode_tokens(&lex, &build(&parts)).unwrap();
        let text = stream.to_string();
        prop_assert_eq!(text.parse::<TokenStream>().unwrap(), stream);
    }
}

fn pattern() -> impl Strategy<Value = Vec<(bool, u32)>> {
    prop::collection::vec((any::<bool>(), 1u32..600), 1..8)
}

fn render_pattern(parts: &[(bool, u32)], sr: u32) -> AudioBuffer {
    let mut samples = Vec::new();
    for &(loud, ms) in parts {
        let n = (ms as u64 * sr as u64 / 1000) as usize;
        samples.extend((0..n).map(|i| {
            if loud {
                (12000.0 * (2.0 * std::f64::consts::PI * 300.0 * i as f64 / sr as f64).sin()) as i16
            } else {
                (i % 3) as i16 - 1
            }
        }));
    }
    AudioBuffer::new(samples, sr)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn segments_disjoint_and_cover_loud_windows(parts in pattern(), buffer in 0u32..300) {
        let audio = render_pattern(&parts, 8000);
        prop_assume!(!audio.is_empty());
        let params = SegmentationParams { keep_buffer_ms: buffer, ..Default::default() };
        let segs = split_on_silence(&audio, &params).unwrap();
        for pair in segs.windows(2) {
            prop_assert!(pair[0].end <= pair[1].start);
        }
        for s in &segs {
            prop_assert!(s.start < s.end && s.end <= audio.len());
        }
        let win = params.window_samples(audio.sample_rate);
        for (i, w) in audio.samples.chunks(win).enumerate() {
            if rms_dbfs(w).unwrap() >= params.silence_threshold_dbfs {
                let start = i * win;
                prop_assert!(segs.iter().any(|s| s.start <= start && start + w.len() <= s.end));
            }
        }
        prop_assert_eq!(split_on_silence(&audio, &params).unwrap(), segs);
    }

    #[test]
    fn lower_threshold_only_shrinks_silence(parts in pattern(), t1 in -80.0f64..-10.0, t2 in -80.0f64..-10.0) {
        // Interval *count* is not monotone (a blip can split one silence into
        // two long ones), but silence at the lower threshold is always
        // contained in silence at the higher one.
        let audio = render_pattern(&parts, 8000);
        prop_assume!(!audio.is_empty());
        let (lo, hi) = (t1.min(t2), t1.max(t2));
        let at = |t| detect_silence(&audio, &SegmentationParams { silence_threshold_dbfs: t, ..Default::default() })
            .unwrap();
        let wide = at(hi);
        for s in at(lo) {
            prop_assert!(wide.iter().any(|w| w.start <= s.start && s.end <= w.end));
        }
    }
}

fn emotion() -> impl Strategy<Value = Emotion> {
    prop::sample::select(Emotion::ALL.to_vec())
}

fn rating() -> impl Strategy<Value = RatingRecord> {
    (prop::sample::select(Condition::ALL.to_vec()), emotion(), emotion(), 1u8..=5, 1u8..=5).prop_map(
        |(condition, true_emotion, chosen_emotion, nmos, emos)| RatingRecord {
            rater_id: "r".into(),
            sample_id: "s".into(),
            condition,
            true_emotion,
            chosen_emotion,
            nmos,
            emos,
        },
    )
}

proptest! {
    #[test]
    fn confusion_diagonal_is_accuracy(records in prop::collection::vec(rating(), 1..200)) {
        let acc = accuracy(&records, GroupBy::ConditionEmotion).unwrap();
        for c in Condition::ALL {
            let norm = confusion(&records, c).normalized();
            for e in Emotion::ALL {
                let key = nvkit::eval::Group { condition: c, emotion: Some(e) };
                match acc.get(&key) {
                    Some(&a) => prop_assert_eq!(norm[e.index()][e.index()], a),
                    None => prop_assert_eq!(norm[e.index()][e.index()], 0.0),
                }
            }
        }
    }

    #[test]
    fn mos_within_scale(records in prop::collection::vec(rating(), 1..100)) {
        for field in [MosField::Nmos, MosField::Emos] {
            for by in [GroupBy::Condition, GroupBy::ConditionEmotion] {
                for s in mos(&records, field, by).unwrap().values() {
                    prop_assert!((1.0..=5.0).contains(&s.mean));
                    prop_assert!(s.ci95 >= 0.0);
                }
            }
        }
    }

    #[test]
    fn preference_histograms_are_doubly_stochastic(perms in prop::collection::vec(Just(["A", "B", "C", "D"]).prop_shuffle(), 1..50)) {
        let records: Vec<PreferenceRecord> = perms
            .iter()
            .map(|p| PreferenceRecord { rater_id: "r".into(), emotion: Emotion::Happy, ranking: p.map(String::from) })
            .collect();
        let h = preference(&records, Emotion::Happy).unwrap();
        let variants: BTreeSet<_> = h.variants.iter().cloned().collect();
        prop_assert_eq!(variants.len(), 4);
        for row in &h.fractions {
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        for k in 0..4 {
            prop_assert!((h.fractions.iter().map(|r| r[k]).sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }
}
