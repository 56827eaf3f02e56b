//! JSON parameter files, the single input format of the command line.
//!
//! ```json
//! {"mode": "limit", "g_plus": "1", "A_plus": [{"x": "1", "w": "1/4"}]}
//! {"mode": "limit", "preset": "multi_alpha", "alpha": "1", "a": "0.25"}
//! {"mode": "finiteN", "gamma_plus": "20", "alpha_plus": [{"value": "1/2", "mult": 3}]}
//! {"m": ["1/2", "1/3"]}
//! ```
//! Rationals are strings such as `"3"`, `"-1/4"` or `"2.5e-3"`. A file with
//! an `m` list and no mode is a moment sequence, as written by `moments`.

use crate::charparams::{Atom, LimitParams, OmegaParams, Param};
use crate::error::{Error, Result};
use crate::fps::{parse_rational, Q};
use crate::limitshape::Preset;
use serde::de::IgnoredAny;
use serde::Deserialize;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAtom {
    x: String,
    w: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParam {
    value: String,
    #[serde(default = "one")]
    mult: u64,
}

fn one() -> u64 {
    1
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct RawFile {
    mode: Option<String>,
    g_plus: Option<String>,
    g_minus: Option<String>,
    A_plus: Option<Vec<RawAtom>>,
    A_minus: Option<Vec<RawAtom>>,
    B_plus: Option<Vec<RawAtom>>,
    B_minus: Option<Vec<RawAtom>>,
    preset: Option<String>,
    gamma: Option<String>,
    alpha: Option<String>,
    a: Option<String>,
    beta: Option<String>,
    b: Option<String>,
    gamma1: Option<String>,
    gamma2: Option<String>,
    alpha_tilde: Option<String>,
    a_tilde: Option<String>,
    alpha_plus: Option<Vec<RawParam>>,
    alpha_minus: Option<Vec<RawParam>>,
    beta_plus: Option<Vec<RawParam>>,
    beta_minus: Option<Vec<RawParam>>,
    gamma_plus: Option<String>,
    gamma_minus: Option<String>,
    m: Option<Vec<String>>,
    // further fields of a moment file, ignored on input
    #[serde(rename = "t")]
    _t: Option<IgnoredAny>,
    #[serde(rename = "c")]
    _c: Option<IgnoredAny>,
    #[serde(rename = "m_tilde")]
    _m_tilde: Option<IgnoredAny>,
    #[serde(rename = "route")]
    _route: Option<IgnoredAny>,
}

/// Parsed content of a parameter file.
#[derive(Clone, Debug, PartialEq)]
pub enum ParamFile {
    /// Scaling-limit data, with the preset it came from if any.
    Limit { params: LimitParams, preset: Option<Preset> },
    /// A single character of `U(N)`.
    FiniteN(OmegaParams),
    /// Moments `m_1..m_K` of a limit measure.
    Moments(Vec<Q>),
}

impl ParamFile {
    /// Limit parameters, or an input error for other file kinds.
    pub fn limit(&self) -> Result<&LimitParams> {
        match self {
            ParamFile::Limit { params, .. } => Ok(params),
            _ => Err(Error::InvalidParams("expected a file with \"mode\": \"limit\"".into())),
        }
    }

    pub fn preset(&self) -> Option<&Preset> {
        match self {
            ParamFile::Limit { preset, .. } => preset.as_ref(),
            _ => None,
        }
    }

    /// Character parameters, or an input error for other file kinds.
    pub fn finite(&self) -> Result<&OmegaParams> {
        match self {
            ParamFile::FiniteN(p) => Ok(p),
            _ => Err(Error::InvalidParams("expected a file with \"mode\": \"finiteN\"".into())),
        }
    }
}

fn rat(field: &str, s: &Option<String>) -> Result<Option<Q>> {
    s.as_deref()
        .map(|v| parse_rational(v).map_err(|_| Error::Parse(format!("field {field}: not a rational: {v:?}"))))
        .transpose()
}

fn rat_or_zero(field: &str, s: &Option<String>) -> Result<Q> {
    Ok(rat(field, s)?.unwrap_or_default())
}

fn atoms(field: &str, v: &Option<Vec<RawAtom>>) -> Result<Vec<Atom>> {
    v.iter()
        .flatten()
        .map(|a| Ok(Atom::new(rat(field, &Some(a.x.clone()))?.unwrap(), rat(field, &Some(a.w.clone()))?.unwrap())))
        .collect()
}

fn params(field: &str, v: &Option<Vec<RawParam>>) -> Result<Vec<Param>> {
    v.iter()
        .flatten()
        .map(|p| {
            if p.mult == 0 {
                return Err(Error::InvalidParams(format!("field {field}: multiplicity must be positive")));
            }
            Ok(Param::new(rat(field, &Some(p.value.clone()))?.unwrap(), p.mult))
        })
        .collect()
}

fn reject(present: bool, what: &str, mode: &str) -> Result<()> {
    if present {
        Err(Error::Parse(format!("{what} is not allowed in {mode} files")))
    } else {
        Ok(())
    }
}

/// Parses and validates a parameter file.
pub fn parse_param_file(text: &str) -> Result<ParamFile> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("parameter file: {e}")))?;
    let atomic = raw.g_plus.is_some()
        || raw.g_minus.is_some()
        || raw.A_plus.is_some()
        || raw.A_minus.is_some()
        || raw.B_plus.is_some()
        || raw.B_minus.is_some();
    let finite = raw.alpha_plus.is_some()
        || raw.alpha_minus.is_some()
        || raw.beta_plus.is_some()
        || raw.beta_minus.is_some()
        || raw.gamma_plus.is_some()
        || raw.gamma_minus.is_some();
    let preset_keys = [
        ("gamma", &raw.gamma),
        ("alpha", &raw.alpha),
        ("a", &raw.a),
        ("beta", &raw.beta),
        ("b", &raw.b),
        ("gamma1", &raw.gamma1),
        ("gamma2", &raw.gamma2),
        ("alpha_tilde", &raw.alpha_tilde),
        ("a_tilde", &raw.a_tilde),
    ];
    let has_preset_keys = preset_keys.iter().any(|(_, v)| v.is_some());
    match raw.mode.as_deref() {
        Some("limit") => {
            reject(finite, "character parameters (alpha_plus, ...)", "limit")?;
            reject(raw.m.is_some(), "a moment list", "limit")?;
            match &raw.preset {
                Some(name) => {
                    reject(atomic, "atomic data together with a preset", "limit")?;
                    let mut vals = Vec::new();
                    for (k, v) in preset_keys {
                        if let Some(q) = rat(k, v)? {
                            vals.push((k, q));
                        }
                    }
                    let p = Preset::from_name(name, |k| vals.iter().find(|(n, _)| *n == k).map(|(_, q)| q.clone()))?;
                    Ok(ParamFile::Limit { params: p.limit_params(), preset: Some(p) })
                }
                None => {
                    reject(has_preset_keys, "preset parameters without a preset", "limit")?;
                    let params = LimitParams::new(
                        rat_or_zero("g_plus", &raw.g_plus)?,
                        rat_or_zero("g_minus", &raw.g_minus)?,
                        atoms("A_plus", &raw.A_plus)?,
                        atoms("A_minus", &raw.A_minus)?,
                        atoms("B_plus", &raw.B_plus)?,
                        atoms("B_minus", &raw.B_minus)?,
                    )?;
                    Ok(ParamFile::Limit { params, preset: None })
                }
            }
        }
        Some("finiteN") => {
            reject(atomic || raw.preset.is_some() || has_preset_keys, "limit data", "finiteN")?;
            reject(raw.m.is_some(), "a moment list", "finiteN")?;
            Ok(ParamFile::FiniteN(OmegaParams::new(
                params("alpha_plus", &raw.alpha_plus)?,
                params("alpha_minus", &raw.alpha_minus)?,
                params("beta_plus", &raw.beta_plus)?,
                params("beta_minus", &raw.beta_minus)?,
                rat_or_zero("gamma_plus", &raw.gamma_plus)?,
                rat_or_zero("gamma_minus", &raw.gamma_minus)?,
            )?))
        }
        Some(other) => Err(Error::Parse(format!("unknown mode {other:?} (expected \"limit\" or \"finiteN\")"))),
        None => {
            let m = raw.m.as_ref().ok_or_else(|| Error::Parse("missing \"mode\"".into()))?;
            reject(atomic || finite || raw.preset.is_some() || has_preset_keys, "parameter data", "moment")?;
            if m.is_empty() {
                return Err(Error::Parse("empty moment list".into()));
            }
            let ms = m.iter().map(|v| rat("m", &Some(v.clone())).map(Option::unwrap)).collect::<Result<_>>()?;
            Ok(ParamFile::Moments(ms))
        }
    }
}
