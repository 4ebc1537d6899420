//! Versioned plain-text model format.
//!
//! ```text
//! rebel-model v1
//! classes ["a","b","c"]
//! features 2
//! config rounds=100;depth=2;...
//! a0 0.1 -0.05 -0.05
//! rounds 1
//! tree 2
//! node 0 0.5 +
//! node 1 -1.25 -
//! node 1 0.75 +
//! vector 0.8 -0.3 -0.5
//! end
//! ```
//!
//! Floats use the shortest decimal that parses back to the same `f64`, so a
//! parse followed by a write reproduces the file byte for byte. Nodes are
//! listed in heap order: the children of node `i` are `2i + 1` (reached on
//! `−1`) and `2i + 2` (reached on `+1`).

use std::fmt::Write as _;
use std::path::Path;

use rebel_core::boost::WeakRound;
use rebel_core::weak::{Polarity, Stump, Tree};
use rebel_core::StrongClassifier;

use super::{read_text, write_text};
use crate::error::{Error, Result};

pub const MODEL_FORMAT: &str = "rebel-model v1";

/// A model together with its class tokens and training settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile {
    pub classes: Vec<String>,
    /// Free-form settings line, normally [`rebel_core::TrainConfig::fingerprint`].
    pub config: String,
    pub model: StrongClassifier,
}

fn floats(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(" ")
}

pub fn serialize_model(file: &ModelFile) -> String {
    let m = &file.model;
    let mut out = String::new();
    writeln!(out, "{MODEL_FORMAT}").unwrap();
    writeln!(out, "classes {}", serde_json::to_string(&file.classes).expect("strings serialize")).unwrap();
    writeln!(out, "features {}", m.n_features()).unwrap();
    writeln!(out, "config {}", file.config).unwrap();
    writeln!(out, "a0 {}", floats(m.a0())).unwrap();
    writeln!(out, "rounds {}", m.n_rounds()).unwrap();
    for round in m.rounds() {
        writeln!(out, "tree {}", round.tree.depth()).unwrap();
        for node in round.tree.nodes() {
            let sign = match node.polarity {
                Polarity::Positive => '+',
                Polarity::Negative => '-',
            };
            writeln!(out, "node {} {:?} {sign}", node.feature, node.threshold).unwrap();
        }
        writeln!(out, "vector {}", floats(&round.vector)).unwrap();
    }
    writeln!(out, "end").unwrap();
    out
}

pub fn save_model(path: &Path, file: &ModelFile) -> Result<()> {
    write_text(path, &serialize_model(file))
}

pub fn load_model(path: &Path) -> Result<ModelFile> {
    parse_model(&read_text(path)?)
}

struct Lines<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn err(offset: usize, message: impl Into<String>) -> Error {
        Error::ModelParse { offset, message: message.into() }
    }

    /// Next line and the byte offset where it starts.
    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        if self.pos >= self.text.len() {
            return Err(Self::err(self.pos, format!("unexpected end of file, expected {what}")));
        }
        let start = self.pos;
        let rest = &self.text[start..];
        let (line, advance) = match rest.find('\n') {
            Some(i) => (&rest[..i], i + 1),
            None => (rest, rest.len()),
        };
        self.pos += advance;
        Ok((start, line.strip_suffix('\r').unwrap_or(line)))
    }

    /// Next line, which must start with `key `; returns the remainder and its offset.
    fn keyed(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let (at, line) = self.next(key)?;
        match line.strip_prefix(key) {
            Some(rest) if rest.is_empty() => Ok((at + key.len(), rest)),
            Some(rest) if rest.starts_with(' ') => Ok((at + key.len() + 1, &rest[1..])),
            _ => Err(Self::err(at, format!("expected `{key}` line, found {line:?}"))),
        }
    }
}

/// Whitespace-separated tokens with their byte offsets.
fn tokens(at: usize, s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices().chain(std::iter::once((s.len(), ' '))) {
        match (c == ' ', start) {
            (true, Some(b)) => {
                out.push((at + b, &s[b..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

fn parse_num<T: std::str::FromStr>(at: usize, token: &str, what: &str) -> Result<T> {
    token.parse().map_err(|_| Lines::err(at, format!("invalid {what}: {token:?}")))
}

fn parse_floats(at: usize, s: &str, count: usize, what: &str) -> Result<Vec<f64>> {
    let toks = tokens(at, s);
    if toks.len() != count {
        return Err(Lines::err(at, format!("{what} needs {count} values, found {}", toks.len())));
    }
    toks.into_iter()
        .map(|(o, t)| {
            let v: f64 = parse_num(o, t, what)?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Lines::err(o, format!("non-finite {what} value")))
            }
        })
        .collect()
}

fn parse_count(at: usize, s: &str, what: &str) -> Result<usize> {
    match tokens(at, s).as_slice() {
        [(o, t)] => parse_num(*o, t, what),
        _ => Err(Lines::err(at, format!("expected a single {what}"))),
    }
}

pub fn parse_model(text: &str) -> Result<ModelFile> {
    let mut lines = Lines { text, pos: 0 };
    let (_, header) = lines.next("format header")?;
    if header != MODEL_FORMAT {
        return match header.strip_prefix("rebel-model ") {
            Some(v) => Err(Error::UnsupportedVersion { found: v.to_string(), expected: MODEL_FORMAT }),
            None => Err(Lines::err(0, format!("not a model file: header {header:?}"))),
        };
    }
    let (at, classes) = lines.keyed("classes")?;
    let classes: Vec<String> = serde_json::from_str(classes)
        .map_err(|e| Lines::err(at + e.column().saturating_sub(1), format!("bad class list: {e}")))?;
    let k = classes.len();
    if k < 2 {
        return Err(Lines::err(at, "a model needs at least two classes"));
    }
    let (at, d) = lines.keyed("features")?;
    let d = parse_count(at, d, "feature count")?;
    let (_, config) = lines.keyed("config")?;
    let (at, a0) = lines.keyed("a0")?;
    let a0 = parse_floats(at, a0, k, "a0")?;
    let (at, n_rounds) = lines.keyed("rounds")?;
    let n_rounds = parse_count(at, n_rounds, "round count")?;

    let mut rounds = Vec::with_capacity(n_rounds.min(1 << 16));
    for _ in 0..n_rounds {
        let (tree_at, depth) = lines.keyed("tree")?;
        let depth = parse_count(tree_at, depth, "tree depth")?;
        if !(1..=24).contains(&depth) {
            return Err(Lines::err(tree_at, format!("tree depth {depth} outside 1..=24")));
        }
        let mut nodes = Vec::with_capacity((1 << depth) - 1);
        for _ in 0..(1usize << depth) - 1 {
            let (at, node) = lines.keyed("node")?;
            let toks = tokens(at, node);
            let [(fo, f), (to, t), (po, p)] = toks.as_slice() else {
                return Err(Lines::err(at, "node needs feature, threshold and polarity"));
            };
            let feature: usize = parse_num(*fo, f, "feature index")?;
            if feature >= d {
                return Err(Lines::err(*fo, format!("feature {feature} out of range for {d} features")));
            }
            let threshold: f64 = parse_num(*to, t, "threshold")?;
            if !threshold.is_finite() {
                return Err(Lines::err(*to, "non-finite threshold"));
            }
            let polarity = match *p {
                "+" => Polarity::Positive,
                "-" => Polarity::Negative,
                _ => return Err(Lines::err(*po, format!("polarity must be + or -, found {p:?}"))),
            };
            nodes.push(Stump::new(feature, threshold, polarity));
        }
        let tree = Tree::from_nodes(depth, nodes).map_err(|e| Lines::err(tree_at, e.to_string()))?;
        let (at, vector) = lines.keyed("vector")?;
        rounds.push(WeakRound { tree, vector: parse_floats(at, vector, k, "vector")? });
    }
    let (at, end) = lines.next("end")?;
    if end != "end" {
        return Err(Lines::err(at, format!("expected `end`, found {end:?}")));
    }
    if text[lines.pos..].chars().any(|c| !c.is_whitespace()) {
        return Err(Lines::err(lines.pos, "trailing content after `end`"));
    }
    let model = StrongClassifier::from_parts(k, d, a0, rounds)?;
    Ok(ModelFile { classes, config: config.to_string(), model })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ModelFile {
        let mut model = StrongClassifier::empty(3, 2);
        model.set_a0(vec![0.1, -0.05, 1e-300]).unwrap();
        let tree = Tree::from_nodes(
            2,
            vec![
                Stump::new(0, 0.5, Polarity::Positive),
                Stump::new(1, -1.25, Polarity::Negative),
                Stump::new(1, 1.0 / 3.0, Polarity::Positive),
            ],
        )
        .unwrap();
        model.push(tree, vec![0.8, -0.3, -0.5]).unwrap();
        ModelFile { classes: vec!["a".into(), "b c".into(), "\"q\"".into()], config: "rounds=1".into(), model }
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let text = serialize_model(&sample());
        let parsed = parse_model(&text).unwrap();
        assert_eq!(parsed, sample());
        assert_eq!(serialize_model(&parsed), text);
    }

    #[test]
    fn version_and_offsets() {
        let text = serialize_model(&sample()).replace("rebel-model v1", "rebel-model v9");
        assert!(matches!(parse_model(&text), Err(Error::UnsupportedVersion { .. })));

        let good = serialize_model(&sample());
        let bad = good.replace("node 1 -1.25 -", "node 1 -1.25 x");
        let expected = good.find("node 1 -1.25 -").unwrap() + "node 1 -1.25 ".len();
        match parse_model(&bad) {
            Err(Error::ModelParse { offset, .. }) => assert_eq!(offset, expected),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_model(&good[..good.len() - 4]), Err(Error::ModelParse { .. })));
    }
}
