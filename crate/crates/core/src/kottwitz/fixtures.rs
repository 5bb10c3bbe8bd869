//! Parameter fixture files.
//!
//! ```text
//! ambient sl2             # preset for the following records
//! param a1
//! gamma0 x^2+1
//! beta inf 1              # also: beta p ..., beta v0 ...
//! mu 0                    # optional Hodge lift override
//! sign -1                 # optional, default +1
//! end
//! ```

use super::ambient::AmbientData;
use super::param::KottwitzParameter;
use crate::abelian::bigvec;
use crate::{Error, Result};
use std::fmt::Write;

#[derive(Clone, Debug)]
pub struct FixtureRecord {
    pub ambient: String,
    pub param: KottwitzParameter,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn ints(line: usize, toks: &[&str]) -> Result<Vec<i64>> {
    toks.iter()
        .map(|t| t.parse::<i64>().map_err(|_| perr(line, format!("expected integer, got {t:?}"))))
        .collect()
}

/// Parses records; ambients are resolved by `resolve` (presets by default).
pub fn parse_fixtures(text: &str, resolve: &dyn Fn(&str) -> Result<AmbientData>) -> Result<Vec<(AmbientData, KottwitzParameter)>> {
    let mut out = Vec::new();
    let mut ambient: Option<(String, AmbientData)> = None;
    let mut cur: Option<KottwitzParameter> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match (toks[0], cur.as_mut()) {
            ("ambient", None) => {
                let name = toks.get(1).ok_or_else(|| perr(line, "ambient needs a name"))?;
                ambient = Some((name.to_string(), resolve(name)?));
            }
            ("param", None) => {
                let (_, amb) = ambient.as_ref().ok_or_else(|| perr(line, "param before ambient"))?;
                let id = toks.get(1).ok_or_else(|| perr(line, "param needs an id"))?;
                cur = Some(KottwitzParameter::zero(amb, id));
            }
            ("gamma0", Some(c)) => c.gamma0 = toks[1..].join(" "),
            ("beta", Some(c)) => {
                let (_, amb) = ambient.as_ref().unwrap();
                let place = toks.get(1).ok_or_else(|| perr(line, "beta needs a place"))?;
                let v = bigvec(&ints(line, &toks[2..])?);
                match *place {
                    "inf" => c.beta_inf = v,
                    "p" => c.beta_p = v,
                    label => {
                        let i = amb.places.index_of(label).ok_or_else(|| perr(line, format!("unknown place {label}")))?;
                        c.beta_finite.push((i, v));
                    }
                }
            }
            ("mu", Some(c)) => c.mu_lift = Some(bigvec(&ints(line, &toks[1..])?)),
            ("sign", Some(c)) => {
                let s = ints(line, &toks[1..2])?[0];
                if s != 1 && s != -1 {
                    return Err(perr(line, "sign must be 1 or -1"));
                }
                c.sign = Some(s as i8);
            }
            ("end", Some(_)) => {
                let (_, amb) = ambient.as_ref().unwrap();
                out.push((amb.clone(), cur.take().unwrap()));
            }
            (kw, _) => return Err(perr(line, format!("unexpected '{kw}'"))),
        }
    }
    if cur.is_some() {
        return Err(perr(text.lines().count(), "unterminated record"));
    }
    Ok(out)
}

pub fn format_fixture(ambient_name: &str, amb: &AmbientData, c: &KottwitzParameter) -> String {
    let join = |v: &[num_bigint::BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let mut s = String::new();
    writeln!(s, "ambient {ambient_name}").unwrap();
    writeln!(s, "param {}", c.id).unwrap();
    if !c.gamma0.is_empty() {
        writeln!(s, "gamma0 {}", c.gamma0).unwrap();
    }
    writeln!(s, "beta inf {}", join(&c.beta_inf)).unwrap();
    writeln!(s, "beta p {}", join(&c.beta_p)).unwrap();
    for (v, x) in &c.beta_finite {
        writeln!(s, "beta {} {}", amb.places.places[*v].label, join(x)).unwrap();
    }
    if let Some(m) = &c.mu_lift {
        writeln!(s, "mu {}", join(m)).unwrap();
    }
    if let Some(sg) = c.sign {
        writeln!(s, "sign {sg}").unwrap();
    }
    writeln!(s, "end").unwrap();
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kottwitz::{kottwitz_invariant, random_parameter};
    use rand::SeedableRng;

    #[test]
    fn round_trip() {
        let amb = AmbientData::preset("sl2").unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        let mut text = String::new();
        let mut params = Vec::new();
        for i in 0..10 {
            let c = random_parameter(&amb, &format!("r{i}"), &mut rng);
            text.push_str(&format_fixture("sl2", &amb, &c));
            params.push(c);
        }
        let parsed = parse_fixtures(&text, &AmbientData::preset).unwrap();
        assert_eq!(parsed.len(), 10);
        for ((a, p), c) in parsed.iter().zip(&params) {
            assert_eq!(kottwitz_invariant(a, p).unwrap(), kottwitz_invariant(&amb, c).unwrap());
        }
        assert!(parse_fixtures("param x\n", &AmbientData::preset).is_err());
        assert!(parse_fixtures("ambient sl2\nparam x\nbeta inf 1\n", &AmbientData::preset).is_err());
    }
}
