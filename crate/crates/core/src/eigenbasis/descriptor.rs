//! Line-oriented text descriptors for modes.
//!
//! ```text
//! descriptor := model SP family (SP key "=" value)* SP lambda
//! model      := "sphere" | "torus"
//! family     := "harmonic"        l=<u32> m=<i32>
//!             | "highest-weight"  k=<u32>
//!             | "zonal"           l=<u32>
//!             | "wave"            terms=<term>(";"<term>)*      (torus)
//!             | "quasimode"       terms=<term>(";"<term>)*
//! term       := <i>,<j>,<re>,<im>       (torus: lattice vector; sphere: l,m)
//! lambda     := decimal frequency
//! ```
//!
//! The trailing frequency is checked against the family on parsing.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::{BasisKey, EigenMode, ModeFamily, TorusTerm};
use crate::error::Error;
use crate::manifolds::ModelKind;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn fmt_terms<'a>(it: impl Iterator<Item = (i64, i64, &'a Complex64)>) -> String {
    it.map(|(i, j, c)| format!("{i},{j},{},{}", c.re, c.im)).collect::<Vec<_>>().join(";")
}

impl fmt::Display for EigenMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let model = match self.model {
            ModelKind::Sphere2 => "sphere",
            _ => "torus",
        };
        match &self.family {
            ModeFamily::SphereHarmonic { l, m } => write!(f, "{model} harmonic l={l} m={m}")?,
            ModeFamily::HighestWeight { k } => write!(f, "{model} highest-weight k={k}")?,
            ModeFamily::Zonal { l } => write!(f, "{model} zonal l={l}")?,
            ModeFamily::TorusWave { terms } => write!(
                f,
                "{model} wave terms={}",
                fmt_terms(terms.iter().map(|t| (t.k[0], t.k[1], &t.c)))
            )?,
            ModeFamily::Quasimode { terms } => write!(
                f,
                "{model} quasimode terms={}",
                fmt_terms(terms.iter().map(|(key, c)| match *key {
                    BasisKey::Sphere { l, m } => (l as i64, m as i64, c),
                    BasisKey::Torus { k } => (k[0], k[1], c),
                }))
            )?,
        }
        write!(f, " {}", self.frequency)
    }
}

fn parse_terms(value: &str) -> Result<Vec<(i64, i64, Complex64)>, Error> {
    value
        .split(';')
        .map(|term| {
            let parts: Vec<&str> = term.split(',').collect();
            if parts.len() != 4 {
                return Err(parse_err(format!("term `{term}` needs four comma-separated fields")));
            }
            let i = parts[0].parse().map_err(|_| parse_err(format!("bad index `{}`", parts[0])))?;
            let j = parts[1].parse().map_err(|_| parse_err(format!("bad index `{}`", parts[1])))?;
            let re = parts[2].parse().map_err(|_| parse_err(format!("bad number `{}`", parts[2])))?;
            let im = parts[3].parse().map_err(|_| parse_err(format!("bad number `{}`", parts[3])))?;
            Ok((i, j, Complex64::new(re, im)))
        })
        .collect()
}

impl FromStr for EigenMode {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self, Error> {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() < 3 {
            return Err(parse_err("expected `model family params λ`"));
        }
        let model = tokens[0];
        let family = tokens[1];
        let lambda: f64 = tokens[tokens.len() - 1]
            .parse()
            .map_err(|_| parse_err(format!("bad frequency `{}`", tokens[tokens.len() - 1])))?;
        let mut params = std::collections::HashMap::new();
        for tok in &tokens[2..tokens.len() - 1] {
            let (k, v) = tok.split_once('=').ok_or_else(|| parse_err(format!("expected key=value, got `{tok}`")))?;
            params.insert(k, v);
        }
        let get = |k: &str| params.get(k).copied().ok_or_else(|| parse_err(format!("missing `{k}`")));
        let int = |k: &str| -> Result<i64, Error> {
            get(k)?.parse().map_err(|_| parse_err(format!("`{k}` must be an integer")))
        };
        let mode = match (model, family) {
            ("sphere", "harmonic") => EigenMode::sphere_harmonic(int("l")? as u32, int("m")? as i32)?,
            ("sphere", "highest-weight") => EigenMode::highest_weight(int("k")? as u32)?,
            ("sphere", "zonal") => EigenMode::zonal(int("l")? as u32)?,
            ("torus", "wave") => EigenMode::torus_wave(
                parse_terms(get("terms")?)?
                    .into_iter()
                    .map(|(i, j, c)| TorusTerm { k: [i, j], c })
                    .collect(),
            )?,
            (m, "quasimode") if m == "sphere" || m == "torus" => {
                let terms = parse_terms(get("terms")?)?
                    .into_iter()
                    .map(|(i, j, c)| {
                        let key = if m == "sphere" {
                            if i < 0 || j.unsigned_abs() > i as u64 {
                                return Err(parse_err(format!("bad sphere index ({i},{j})")));
                            }
                            BasisKey::Sphere { l: i as u32, m: j as i32 }
                        } else {
                            BasisKey::Torus { k: [i, j] }
                        };
                        Ok((key, c))
                    })
                    .collect::<Result<Vec<_>, Error>>()?;
                return EigenMode::from_coefficients(terms, lambda);
            }
            _ => return Err(parse_err(format!("unknown model/family `{model} {family}`"))),
        };
        if (mode.frequency - lambda).abs() > 1e-9 * lambda.max(1.0) {
            return Err(parse_err(format!(
                "frequency {lambda} does not match the family (expected {})",
                mode.frequency
            )));
        }
        Ok(mode)
    }
}
