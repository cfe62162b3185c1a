//! Certificate records for border-rank bounds.
//!
//! A [`BoundReport`] captures everything needed to reproduce and audit a
//! bound: the tensor's content id, the method and its parameters (flattening
//! order, prime, seed, target rank), the computed rank, the resulting
//! bounds, an optional witness payload, and whether the result is certified
//! (full rank or nonzero determinant observed in modular arithmetic) or
//! merely probabilistic.

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// How a bound was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Classical flattening rank in one mode.
    Flattening,
    /// Young flattening rank at order `p`.
    Young,
    /// Commutator-block determinant criterion.
    CommutatorDet,
    /// Subspace witness test on the commutator family.
    Griesser,
    /// Upper bound by exact embedding into a tensor of known border rank.
    SpecializationUb,
    /// Upper bound evidenced by an `ε`-family of bounded rank.
    EpsFamilyUb,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Method::Flattening => "flattening",
            Method::Young => "young",
            Method::CommutatorDet => "commutator-det",
            Method::Griesser => "griesser",
            Method::SpecializationUb => "specialization-ub",
            Method::EpsFamilyUb => "eps-family-ub",
        };
        write!(f, "{s}")
    }
}

/// A bound certificate. Serializes to the machine report format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// Content id of the tensor the bound refers to (FNV-1a of the
    /// canonical file form).
    pub tensor_id: String,
    pub method: Method,
    /// Flattening order, when the method has one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    /// Prime used for the reported modular computation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    /// Seed the run flowed from, when randomized.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Target rank for witness-style methods.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    /// Computed matrix rank backing the bound, so consumers can re-derive.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_bound: Option<usize>,
    /// Witness payload for subspace methods.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    /// True exactly when full rank (or a nonzero determinant) was observed
    /// modulo a prime, which proves the statement over the rationals.
    pub certified: bool,
}

impl BoundReport {
    pub fn new(tensor_id: String, method: Method) -> Self {
        Self {
            tensor_id,
            method,
            p: None,
            prime: None,
            seed: None,
            r: None,
            rank: None,
            lower_bound: None,
            upper_bound: None,
            witness: None,
            certified: false,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// One-paragraph human rendering.
    pub fn render(&self) -> String {
        let mut lines = vec![
            format!("tensor   {}", self.tensor_id),
            format!("method   {}", self.method),
        ];
        if let Some(p) = self.p {
            lines.push(format!("p        {p}"));
        }
        if let Some(prime) = self.prime {
            lines.push(format!("prime    {prime}"));
        }
        if let Some(seed) = self.seed {
            lines.push(format!("seed     {seed}"));
        }
        if let Some(r) = self.r {
            lines.push(format!("r        {r}"));
        }
        if let Some(rank) = self.rank {
            lines.push(format!("rank     {rank}"));
        }
        match (self.lower_bound, self.upper_bound) {
            (Some(lb), Some(ub)) => lines.push(format!("bounds   {lb} <= border rank <= {ub}")),
            (Some(lb), None) => lines.push(format!("bound    border rank >= {lb}")),
            (None, Some(ub)) => lines.push(format!("bound    border rank <= {ub}")),
            (None, None) => {}
        }
        lines.push(format!(
            "status   {}",
            if self.certified {
                "certified"
            } else {
                "probabilistic"
            }
        ));
        if let Some(w) = &self.witness {
            lines.push(format!("witness  {w}"));
        }
        lines.join("\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip() {
        let mut r = BoundReport::new("deadbeef".into(), Method::Young);
        r.p = Some(2);
        r.prime = Some(31);
        r.rank = Some(50);
        r.lower_bound = Some(9);
        r.certified = true;
        let s = r.to_json();
        let back = BoundReport::from_json(&s).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn render_mentions_certification() {
        let r = BoundReport::new("x".into(), Method::CommutatorDet);
        assert!(r.render().contains("probabilistic"));
    }
}
