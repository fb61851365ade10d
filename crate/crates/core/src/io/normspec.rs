//! Norm selectors of the form `kind:key=value,...`, e.g. `lorentz:p=3,q=1,l=-3`.

use std::fmt;
use std::str::FromStr;

use crate::error::{LandauError, Result};
use crate::grid::Field;
use crate::norms::{dyadic_norm, llogl, lorentz_norm, lp_norm, sobolev_norm, LorentzFlavor, SobolevFlavor};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormSpec {
    Lp { p: f64, l: f64 },
    LLogL,
    Sobolev { m: f64, l: f64, flavor: Option<SobolevFlavor> },
    Lorentz { p: f64, q: f64, l: f64, flavor: Option<LorentzFlavor> },
    Dyadic { s: f64, l: f64 },
}

fn parse_num(key: &str, v: &str) -> Result<f64> {
    match v {
        "inf" | "infinity" => Ok(f64::INFINITY),
        _ => v
            .parse::<f64>()
            .map_err(|_| LandauError::Input(format!("norm parameter {key}: cannot parse {v:?}"))),
    }
}

impl FromStr for NormSpec {
    type Err = LandauError;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut kv = Vec::new();
        for part in rest.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| LandauError::Input(format!("norm parameter {part:?} is not key=value")))?;
            kv.push((k.trim(), v.trim()));
        }
        let allowed: &[&str] = match kind {
            "lp" => &["p", "l"],
            "llogl" => &[],
            "sobolev" => &["m", "l", "flavor"],
            "lorentz" => &["p", "q", "l", "flavor"],
            "dyadic" => &["s", "l"],
            _ => return Err(LandauError::Input(format!("unknown norm kind {kind:?}"))),
        };
        if let Some((k, _)) = kv.iter().find(|(k, _)| !allowed.contains(k)) {
            return Err(LandauError::Input(format!("norm {kind} has no parameter {k:?}")));
        }
        let get = |key: &str, default: Option<f64>| -> Result<f64> {
            match kv.iter().find(|(k, _)| *k == key) {
                Some((_, v)) => parse_num(key, v),
                None => default.ok_or_else(|| LandauError::Input(format!("norm {kind} needs {key}"))),
            }
        };
        let flavor = kv.iter().find(|(k, _)| *k == "flavor").map(|(_, v)| *v);
        Ok(match kind {
            "lp" => NormSpec::Lp { p: get("p", None)?, l: get("l", Some(0.0))? },
            "llogl" => NormSpec::LLogL,
            "sobolev" => NormSpec::Sobolev {
                m: get("m", None)?,
                l: get("l", Some(0.0))?,
                flavor: flavor.map(parse_sobolev_flavor).transpose()?,
            },
            "lorentz" => NormSpec::Lorentz {
                p: get("p", None)?,
                q: get("q", None)?,
                l: get("l", Some(0.0))?,
                flavor: flavor.map(parse_lorentz_flavor).transpose()?,
            },
            _ => NormSpec::Dyadic { s: get("s", None)?, l: get("l", Some(0.0))? },
        })
    }
}

pub fn parse_lorentz_flavor(s: &str) -> Result<LorentzFlavor> {
    match s {
        "starred" => Ok(LorentzFlavor::Starred),
        "maximal" => Ok(LorentzFlavor::Maximal),
        _ => Err(LandauError::Input(format!("unknown Lorentz flavor {s:?}"))),
    }
}

pub fn parse_sobolev_flavor(s: &str) -> Result<SobolevFlavor> {
    match s {
        "homogeneous" => Ok(SobolevFlavor::Homogeneous),
        "weighted" => Ok(SobolevFlavor::Weighted),
        _ => Err(LandauError::Input(format!("unknown Sobolev flavor {s:?}"))),
    }
}

/// Flavor used when neither the spec nor the caller names one.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FlavorDefaults {
    pub lorentz: Option<LorentzFlavor>,
    pub sobolev: Option<SobolevFlavor>,
}

impl FlavorDefaults {
    /// Interprets a bare flavor name as Lorentz or Sobolev.
    pub fn from_name(name: &str) -> Result<Self> {
        if let Ok(f) = parse_lorentz_flavor(name) {
            return Ok(FlavorDefaults { lorentz: Some(f), sobolev: None });
        }
        if let Ok(f) = parse_sobolev_flavor(name) {
            return Ok(FlavorDefaults { lorentz: None, sobolev: Some(f) });
        }
        Err(LandauError::Input(format!("unknown flavor {name:?}")))
    }
}

impl NormSpec {
    pub fn eval(&self, f: &Field, defaults: FlavorDefaults) -> Result<f64> {
        match *self {
            NormSpec::Lp { p, l } => lp_norm(f, p, l),
            NormSpec::LLogL => Ok(llogl(f)),
            NormSpec::Sobolev { m, l, flavor } => {
                sobolev_norm(f, m, l, flavor.or(defaults.sobolev).unwrap_or(SobolevFlavor::Weighted))
            }
            NormSpec::Lorentz { p, q, l, flavor } => {
                lorentz_norm(f, p, q, l, flavor.or(defaults.lorentz).unwrap_or(LorentzFlavor::Maximal))
            }
            NormSpec::Dyadic { s, l } => dyadic_norm(f, s, l),
        }
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lf = |f: &LorentzFlavor| match f {
            LorentzFlavor::Starred => "starred",
            LorentzFlavor::Maximal => "maximal",
        };
        let sf = |f: &SobolevFlavor| match f {
            SobolevFlavor::Homogeneous => "homogeneous",
            SobolevFlavor::Weighted => "weighted",
        };
        match self {
            NormSpec::Lp { p, l } => write!(w, "lp:p={p},l={l}"),
            NormSpec::LLogL => write!(w, "llogl"),
            NormSpec::Sobolev { m, l, flavor } => {
                write!(w, "sobolev:m={m},l={l}")?;
                flavor.iter().try_for_each(|f| write!(w, ",flavor={}", sf(f)))
            }
            NormSpec::Lorentz { p, q, l, flavor } => {
                write!(w, "lorentz:p={p},q={q},l={l}")?;
                flavor.iter().try_for_each(|f| write!(w, ",flavor={}", lf(f)))
            }
            NormSpec::Dyadic { s, l } => write!(w, "dyadic:s={s},l={l}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let s: NormSpec = "lorentz:p=3,q=1,l=-3".parse().unwrap();
        assert_eq!(s, NormSpec::Lorentz { p: 3.0, q: 1.0, l: -3.0, flavor: None });
        let s: NormSpec = "lp:p=inf".parse().unwrap();
        assert_eq!(s, NormSpec::Lp { p: f64::INFINITY, l: 0.0 });
        assert_eq!("llogl".parse::<NormSpec>().unwrap(), NormSpec::LLogL);
        let s: NormSpec = "sobolev:m=1,l=2,flavor=homogeneous".parse().unwrap();
        assert_eq!(s.to_string().parse::<NormSpec>().unwrap(), s);
        assert!("lorentz:p=3".parse::<NormSpec>().is_err());
        assert!("lp:p=2,z=1".parse::<NormSpec>().is_err());
        assert!("besov:s=1".parse::<NormSpec>().is_err());
    }
}
