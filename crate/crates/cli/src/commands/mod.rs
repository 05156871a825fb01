use std::str::FromStr;

use anyhow::{anyhow, Result};
use mab_core::model::bo_regime_margin;
use mab_core::{EffectOrder, FourierGauge, GaugeSpec, ModelParams};
use serde_json::{json, Value};

pub mod berry;
pub mod dynamics;
pub mod holonomy;
pub mod spectrum;
pub mod surfaces;

/// ξ as a decimal or fraction ("0.5", "-1", "3/2").
#[derive(Debug, Clone, Copy)]
pub struct Xi(pub EffectOrder);

impl FromStr for Xi {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        let value = match s.split_once('/') {
            Some((n, d)) => {
                let n: f64 = n.trim().parse().map_err(|_| format!("bad ξ `{s}`"))?;
                let d: f64 = d.trim().parse().map_err(|_| format!("bad ξ `{s}`"))?;
                n / d
            }
            None => s.parse().map_err(|_| format!("bad ξ `{s}`"))?,
        };
        EffectOrder::new(value).map(Xi).map_err(|e| e.to_string())
    }
}

/// `zero`, `single`, or `fourier:a0=..,lin=..,a1=..,b1=..,a2=..`.
#[derive(Debug, Clone)]
pub struct Gauge(pub GaugeSpec);

impl FromStr for Gauge {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "zero" => return Ok(Gauge(GaugeSpec::Zero)),
            "single" => return Ok(Gauge(GaugeSpec::SingleValued)),
            _ => {}
        }
        let body = s
            .trim()
            .strip_prefix("fourier:")
            .ok_or_else(|| format!("unknown gauge `{s}` (zero, single or fourier:...)"))?;
        let (mut a0, mut lin) = (0.0, 0.0);
        let mut harmonics: Vec<(f64, f64)> = Vec::new();
        for item in body.split(',').filter(|t| !t.trim().is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| format!("gauge term `{item}` is not key=value"))?;
            let (key, value) = (key.trim(), value.trim());
            let v: f64 = value
                .parse()
                .map_err(|_| format!("gauge term `{item}`: bad number"))?;
            match key {
                "a0" => a0 = v,
                "lin" => lin = v,
                _ => {
                    let (slot, n) = key.split_at(1);
                    let n: usize = n
                        .parse()
                        .map_err(|_| format!("unknown gauge term `{key}`"))?;
                    if n == 0 || !matches!(slot, "a" | "b") {
                        return Err(format!("unknown gauge term `{key}`"));
                    }
                    if harmonics.len() < n {
                        harmonics.resize(n, (0.0, 0.0));
                    }
                    if slot == "a" {
                        harmonics[n - 1].0 = v;
                    } else {
                        harmonics[n - 1].1 = v;
                    }
                }
            }
        }
        FourierGauge::new(a0, lin, harmonics)
            .map(|g| Gauge(GaugeSpec::Fourier(g)))
            .map_err(|e| e.to_string())
    }
}

pub fn xi_or_default(xi: Option<Xi>) -> EffectOrder {
    xi.map_or(EffectOrder::LINEAR, |x| x.0)
}

/// k = 0 selects the uncoupled oscillator where the command allows it.
pub fn model(k: f64, xi: EffectOrder, allow_uncoupled: bool) -> Result<ModelParams> {
    if k == 0.0 && allow_uncoupled {
        return Ok(ModelParams::uncoupled(xi));
    }
    ModelParams::new(k, xi).map_err(|e| anyhow!(e))
}

pub fn params_json(p: &ModelParams) -> Value {
    json!({ "k": p.k(), "xi": p.xi().value(), "r_ref": p.r_ref() })
}

pub fn bo_margin_json(p: &ModelParams) -> Value {
    json!({ "bo_regime": bo_regime_margin(p), "bo_regime_threshold": spectrum::BO_REGIME_THRESHOLD })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_xi() {
        assert_eq!("1/2".parse::<Xi>().unwrap().0, EffectOrder::LINEAR);
        assert_eq!("-1".parse::<Xi>().unwrap().0, EffectOrder::QUADRATIC);
        assert!("0.3".parse::<Xi>().is_err());
        assert!("0".parse::<Xi>().is_err());
    }

    #[test]
    fn parse_gauge() {
        let Gauge(g) = "fourier:a0=0.5,lin=1,a2=0.25,b1=-1".parse().unwrap();
        let GaugeSpec::Fourier(f) = g else { panic!() };
        assert_eq!(f.a0(), 0.5);
        assert_eq!(f.linear(), 1.0);
        assert_eq!(f.harmonics(), &[(0.0, -1.0), (0.25, 0.0)]);
        assert!(matches!(
            "single".parse::<Gauge>().unwrap().0,
            GaugeSpec::SingleValued
        ));
        assert!("fourier:c3=1".parse::<Gauge>().is_err());
        assert!("bogus".parse::<Gauge>().is_err());
    }
}
