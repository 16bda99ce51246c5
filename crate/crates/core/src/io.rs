//! JSON documents describing channels and schemes.
//!
//! A channel document has keys `alphabets` (name → symbol list for `S1`,
//! `S2`, `X1`, `X2`, `Y`, `Z1`, `Z2`), `state_pmf` (row-major over
//! `(S1, S2)`), `kernel` (row-major over `(S1, S2, X1, X2, Y, Z1, Z2)`, `S1`
//! slowest) and an optional `distortion` object keyed by `S1`/`S2`, each
//! with `reconstruction` symbols and a row-per-state `matrix`.
//!
//! A scheme document has `aux_alphabets` (`U0`, `U1`, `U2`, `V1`, `V2`) and
//! one flat tensor per kernel: `p_u0`, `p_u1`, `p_u2`, `p_x1`, `p_x2`,
//! `p_v1`, `p_v2`, each row-major over `(inputs..., output)` in the
//! factorization order. `X` and `Z` alphabets come from the channel.
//!
//! Probabilities are JSON numbers, decimal strings, or exact `"p/q"`
//! strings.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::channel::names::*;
use crate::channel::{ChannelSpec, DistortionTable, UserDistortion};
use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::prob::{Alphabet, JointDistribution, Variable};
use crate::scheme::SchemeSpec;

/// A probability literal. Serialized as the shortest decimal string that
/// round-trips the `f64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prob(pub f64);

fn parse_prob(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| format!("bad numerator in `{s}`"))?;
            let q: f64 = q.trim().parse().map_err(|_| format!("bad denominator in `{s}`"))?;
            if q == 0.0 {
                return Err(format!("zero denominator in `{s}`"));
            }
            p / q
        }
        None => s.parse().map_err(|_| format!("`{s}` is not a probability"))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

impl<'de> Deserialize<'de> for Prob {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Prob;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number, a decimal string or a \"p/q\" string")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Prob, E> {
                Ok(Prob(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Prob, E> {
                Ok(Prob(v as f64))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Prob, E> {
                Ok(Prob(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Prob, E> {
                parse_prob(v).map(Prob).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

impl Serialize for Prob {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{:?}", self.0))
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistortionDoc {
    reconstruction: Vec<String>,
    matrix: Vec<Vec<Prob>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelDoc {
    alphabets: BTreeMap<String, Vec<String>>,
    state_pmf: Vec<Prob>,
    kernel: Vec<Prob>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    distortion: Option<BTreeMap<String, DistortionDoc>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeDoc {
    aux_alphabets: BTreeMap<String, Vec<String>>,
    p_u0: Vec<Prob>,
    p_u1: Vec<Prob>,
    p_u2: Vec<Prob>,
    p_x1: Vec<Prob>,
    p_x2: Vec<Prob>,
    p_v1: Vec<Prob>,
    p_v2: Vec<Prob>,
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn variables(
    alphabets: &BTreeMap<String, Vec<String>>,
    expected: &[&str],
    what: &str,
) -> Result<BTreeMap<String, Variable>> {
    if let Some(extra) = alphabets.keys().find(|k| !expected.contains(&k.as_str())) {
        return Err(Error::Name(format!("{what}: unknown alphabet `{extra}`")));
    }
    let mut out = BTreeMap::new();
    for &n in expected {
        let symbols = alphabets
            .get(n)
            .ok_or_else(|| Error::Name(format!("{what}: missing alphabet `{n}`")))?;
        out.insert(n.to_string(), Variable::new(n, Alphabet::new(n, symbols.iter().cloned())?));
    }
    Ok(out)
}

fn probs(v: &[Prob]) -> Vec<f64> {
    v.iter().map(|p| p.0).collect()
}

fn to_probs(v: &[f64]) -> Vec<Prob> {
    v.iter().copied().map(Prob).collect()
}

fn pick(vars: &BTreeMap<String, Variable>, names: &[&str]) -> Vec<Variable> {
    names.iter().map(|n| vars[*n].clone()).collect()
}

pub fn load_channel(text: &str) -> Result<ChannelSpec> {
    let doc: ChannelDoc = from_json(text)?;
    let vars = variables(&doc.alphabets, &[S1, S2, X1, X2, Y, Z1, Z2], "channel")?;
    let state_pmf = JointDistribution::from_raw(pick(&vars, &[S1, S2]), probs(&doc.state_pmf))?;
    let kernel = Kernel::new(
        pick(&vars, &[S1, S2, X1, X2]),
        pick(&vars, &[Y, Z1, Z2]),
        probs(&doc.kernel),
    )?;
    let distortion = match doc.distortion {
        None => DistortionTable::hamming(&vars[S1].alphabet, &vars[S2].alphabet),
        Some(map) => {
            if let Some(extra) = map.keys().find(|k| *k != S1 && *k != S2) {
                return Err(Error::Name(format!("distortion: unknown state `{extra}`")));
            }
            let user = |s: &str| -> Result<UserDistortion> {
                match map.get(s) {
                    None => Ok(UserDistortion::hamming(&vars[s].alphabet)),
                    Some(d) => UserDistortion::new(
                        Alphabet::new(&format!("{s}hat"), d.reconstruction.iter().cloned())?,
                        d.matrix.iter().map(|r| probs(r)).collect(),
                    ),
                }
            };
            DistortionTable::new(user(S1)?, user(S2)?)
        }
    };
    ChannelSpec::new(state_pmf, kernel, distortion)
}

fn symbols(v: &Variable) -> Vec<String> {
    v.alphabet.symbols().to_vec()
}

pub fn save_channel(ch: &ChannelSpec) -> String {
    let mut alphabets = BTreeMap::new();
    for v in ch.kernel().inputs().iter().chain(ch.kernel().outputs()) {
        alphabets.insert(v.name.clone(), symbols(v));
    }
    let d = ch.distortion();
    let distortion = [(S1, crate::channel::User::Tx1), (S2, crate::channel::User::Tx2)]
        .into_iter()
        .map(|(s, k)| {
            let u = d.user(k);
            (
                s.to_string(),
                DistortionDoc {
                    reconstruction: u.reconstruction.symbols().to_vec(),
                    matrix: u.matrix.iter().map(|r| to_probs(r)).collect(),
                },
            )
        })
        .collect();
    let doc = ChannelDoc {
        alphabets,
        state_pmf: to_probs(ch.state_pmf().weights()),
        kernel: to_probs(ch.kernel().weights()),
        distortion: Some(distortion),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}

pub fn load_scheme(text: &str, channel: &ChannelSpec) -> Result<SchemeSpec> {
    let doc: SchemeDoc = from_json(text)?;
    let mut vars = variables(&doc.aux_alphabets, &[U0, U1, U2, V1, V2], "scheme")?;
    for n in [X1, X2, Z1, Z2] {
        vars.insert(n.to_string(), channel.variable(n)?.clone());
    }
    let k = |inputs: &[&str], out: &str, w: &[Prob]| {
        Kernel::new(pick(&vars, inputs), pick(&vars, &[out]), probs(w))
    };
    SchemeSpec::new(
        k(&[], U0, &doc.p_u0)?,
        k(&[U0], U1, &doc.p_u1)?,
        k(&[U0], U2, &doc.p_u2)?,
        k(&[U0, U1], X1, &doc.p_x1)?,
        k(&[U0, U2], X2, &doc.p_x2)?,
        k(&[U0, U2, X1, Z1], V1, &doc.p_v1)?,
        k(&[U0, U1, X2, Z2], V2, &doc.p_v2)?,
    )
}

pub fn save_scheme(s: &SchemeSpec) -> String {
    let mut aux_alphabets = BTreeMap::new();
    for n in [U0, U1, U2, V1, V2] {
        let v = s.variable(n).expect("scheme defines every auxiliary");
        aux_alphabets.insert(n.to_string(), symbols(v));
    }
    let w = |k: &Kernel| to_probs(k.weights());
    let doc = SchemeDoc {
        aux_alphabets,
        p_u0: w(&s.p_u0),
        p_u1: w(&s.p_u1),
        p_u2: w(&s.p_u2),
        p_x1: w(&s.p_x1),
        p_x2: w(&s.p_x2),
        p_v1: w(&s.p_v1),
        p_v2: w(&s.p_v2),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{example1, example2};
    use crate::scheme::{build_example2_scheme, Example2SchemeParams};

    #[test]
    fn channel_round_trip_is_bit_identical() {
        for ch in [example1(0.4).unwrap(), example2(0.9, 0.2).unwrap()] {
            let back = load_channel(&save_channel(&ch)).unwrap();
            assert_eq!(back, ch);
            for (a, b) in back.kernel().weights().iter().zip(ch.kernel().weights()) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }

    #[test]
    fn scheme_round_trip() {
        let ch = example2(0.9, 0.2).unwrap();
        let s = build_example2_scheme(&Example2SchemeParams::compression_min_distortion(0.1), &ch).unwrap();
        assert_eq!(load_scheme(&save_scheme(&s), &ch).unwrap(), s);
    }

    const TINY: &str = r#"{
  "alphabets": {"S1": ["0"], "S2": ["0"], "X1": ["0"], "X2": ["0"],
                "Y": ["a", "b"], "Z1": ["0"], "Z2": ["0"]},
  "state_pmf": ["1"],
  "kernel": ["1/2", 0.5]
}"#;

    #[test]
    fn accepts_rationals_and_numbers() {
        let ch = load_channel(TINY).unwrap();
        assert_eq!(ch.kernel().weights(), &[0.5, 0.5]);
        assert!(ch.distortion().user(crate::channel::User::Tx1).is_hamming());
    }

    #[test]
    fn slice_summing_to_099_names_the_cell() {
        let doc = TINY.replace("\"1/2\", 0.5", "\"0.49\", \"0.5\"");
        match load_channel(&doc).unwrap_err() {
            Error::Normalization { context, .. } => {
                assert!(context.contains("S1=0, S2=0, X1=0, X2=0"), "{context}")
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn unknown_alphabet_is_a_name_error() {
        let doc = TINY.replace("\"Z2\"", "\"W\"");
        assert!(matches!(load_channel(&doc), Err(Error::Name(_))));
    }

    #[test]
    fn parse_errors_carry_position() {
        let doc = TINY.replace("\"kernel\"", "\"kernal\"");
        match load_channel(&doc).unwrap_err() {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 5);
                assert!(message.contains("kernal"));
            }
            e => panic!("{e:?}"),
        }
        let doc = TINY.replace("\"1/2\"", "\"half\"");
        assert!(matches!(load_channel(&doc), Err(Error::Parse { line: 5, .. })));
    }
}
