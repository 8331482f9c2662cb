//! Parametric formula families for benchmarking.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use super::{translate_pipeline, PipelineConfig};

/// Header of the CSV written from [`BenchRecord`]s.
pub const CSV_HEADER: &str = "family,n,states,colors,max_t,base_m,millis";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// `⋀ (GF p_i ∨ FG p_{i+1})`
    R,
    /// `(⋀ GF p_i) → (⋀ GF q_i)`
    G,
    /// `⋀ (GF p_i → GF q_i)`
    F,
    /// `¬((⋀ GF p_i) → G (q → F r))`
    Theta,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown family {0:?}; expected one of r, g, f, theta")]
pub struct UnknownFamily(pub String);

impl FromStr for Family {
    type Err = UnknownFamily;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "r" => Ok(Family::R),
            "g" => Ok(Family::G),
            "f" => Ok(Family::F),
            "theta" => Ok(Family::Theta),
            _ => Err(UnknownFamily(s.to_string())),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::R => "r",
            Family::G => "g",
            Family::F => "f",
            Family::Theta => "theta",
        })
    }
}

impl Family {
    pub const ALL: [Family; 4] = [Family::R, Family::G, Family::F, Family::Theta];

    /// The member for parameter `n ≥ 1`, as formula text.
    pub fn formula(self, n: usize) -> String {
        assert!(n >= 1, "families start at n = 1");
        let conj = |parts: Vec<String>| parts.join(" & ");
        let gf = |p: &str| (1..=n).map(|i| format!("G F {p}{i}")).collect::<Vec<_>>();
        match self {
            Family::R => conj((1..=n).map(|i| format!("(G F p{i} | F G p{})", i + 1)).collect()),
            Family::G => format!("({}) -> ({})", conj(gf("p")), conj(gf("q"))),
            Family::F => conj((1..=n).map(|i| format!("(G F p{i} -> G F q{i})")).collect()),
            Family::Theta => format!("!(({}) -> G (q -> F r))", conj(gf("p"))),
        }
    }
}

/// One benchmark row. The size fields are empty when the construction ran
/// out of budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BenchRecord {
    pub family: String,
    pub n: usize,
    pub states: Option<usize>,
    pub colors: Option<usize>,
    pub max_t: Option<usize>,
    pub base_m: Option<usize>,
    pub millis: u128,
}

/// Translates each member of `family` for `n` in the range. Budget
/// exhaustion is recorded, not fatal; any other error is returned.
pub fn bench_families(
    family: Family,
    ns: std::ops::RangeInclusive<usize>,
    cfg: &PipelineConfig,
) -> Result<Vec<BenchRecord>, super::PipelineError> {
    let mut out = Vec::new();
    for n in ns {
        let start = Instant::now();
        let record = match translate_pipeline(&family.formula(n), cfg) {
            Ok(r) => BenchRecord {
                family: family.to_string(),
                n,
                states: Some(r.stats.dpa_states),
                colors: Some(r.stats.colors),
                max_t: Some(r.stats.max_t),
                base_m: r.stats.base_m,
                millis: start.elapsed().as_millis(),
            },
            Err(e) if is_budget(&e) => BenchRecord {
                family: family.to_string(),
                n,
                states: None,
                colors: None,
                max_t: None,
                base_m: None,
                millis: start.elapsed().as_millis(),
            },
            Err(e) => return Err(e),
        };
        out.push(record);
    }
    Ok(out)
}

fn is_budget(e: &super::PipelineError) -> bool {
    use super::PipelineError::{Determinize, Translate};
    use crate::ldba2dpa::DeterminizeError;
    use crate::ltl2ldba::TranslateError;
    matches!(
        e,
        Translate(TranslateError::Budget(_)) | Determinize(DeterminizeError::Budget(_))
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::parse_formula;

    #[test]
    fn texts() {
        assert_eq!(Family::R.formula(1), "(G F p1 | F G p2)");
        assert_eq!(Family::G.formula(2), "(G F p1 & G F p2) -> (G F q1 & G F q2)");
        assert_eq!(Family::F.formula(1), "(G F p1 -> G F q1)");
        assert_eq!(Family::Theta.formula(1), "!((G F p1) -> G (q -> F r))");
        for fam in Family::ALL {
            assert_eq!(fam.to_string().parse::<Family>(), Ok(fam));
            for n in 1..=3 {
                parse_formula(&fam.formula(n)).unwrap();
            }
        }
        assert!("x".parse::<Family>().is_err());
    }

    #[test]
    fn theta_normal_form() {
        let (f, _) = parse_formula(&Family::Theta.formula(1)).unwrap();
        assert_eq!(f.to_string(), "G F p1 & F (q & G !r)");
    }

    #[test]
    fn budget_is_recorded() {
        let cfg = PipelineConfig {
            max_dpa_states: 1,
            ..Default::default()
        };
        let rows = bench_families(Family::R, 1..=1, &cfg).unwrap();
        assert_eq!(rows[0].states, None);
    }
}
