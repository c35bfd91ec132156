//! Node parameters, storage/repair parameters and their admissible space.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rational::{self, parse_rational, Rational};

/// Node parameters `(n, k, L, R, S)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SystemParams {
    /// Total storage nodes.
    pub n: usize,
    /// Reconstruction degree: any `k` nodes recover the file.
    pub k: usize,
    /// Number of clusters.
    #[serde(rename = "L")]
    pub clusters: usize,
    /// Nodes per cluster.
    #[serde(rename = "R")]
    pub cluster_size: usize,
    /// Separate (cluster-less) nodes.
    #[serde(rename = "S")]
    pub separate: usize,
}

impl SystemParams {
    pub fn new(n: usize, k: usize, clusters: usize, cluster_size: usize, separate: usize) -> Self {
        Self { n, k, clusters, cluster_size, separate }
    }

    /// Nodes that live in clusters, `L·R`.
    pub fn cluster_nodes(&self) -> usize {
        self.clusters * self.cluster_size
    }

    /// Node-parameter violations only.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.n == 0 || self.k == 0 || self.clusters == 0 || self.cluster_size == 0 {
            out.push(Violation::new(
                "positive n, k, L, R",
                format!(
                    "n={}, k={}, L={}, R={} must all be positive",
                    self.n, self.k, self.clusters, self.cluster_size
                ),
            ));
        }
        let total = self.cluster_nodes() + self.separate;
        if total != self.n {
            out.push(Violation::new(
                "n = L·R + S",
                format!(
                    "{}·{} + {} = {} ≠ {}",
                    self.clusters, self.cluster_size, self.separate, total, self.n
                ),
            ));
        }
        if !(1 <= self.k && self.k < self.n) {
            out.push(Violation::new("1 ≤ k < n", format!("k={}, n={}", self.k, self.n)));
        }
        out
    }

    pub fn check(&self) -> Result<(), Error> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(ValidationReport { violations: v }))
        }
    }
}

/// Storage/repair parameters `(α, d_I, β_I, d_C, β_C, β_S)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RepairParams {
    #[serde(with = "rational::as_num_den")]
    pub alpha: Rational,
    pub d_i: usize,
    #[serde(with = "rational::as_num_den")]
    pub beta_i: Rational,
    pub d_c: usize,
    #[serde(with = "rational::as_num_den")]
    pub beta_c: Rational,
    #[serde(with = "rational::as_num_den")]
    pub beta_s: Rational,
}

impl RepairParams {
    /// Total helper count `d = d_I + d_C`.
    pub fn d(&self) -> usize {
        self.d_i + self.d_c
    }

    pub fn gamma_i(&self) -> Rational {
        self.beta_i * rational::int(self.d_i as i64)
    }

    pub fn gamma_c(&self) -> Rational {
        self.beta_c * rational::int(self.d_c as i64)
    }

    pub fn gamma_s(&self) -> Rational {
        self.beta_s * rational::int(self.d() as i64)
    }

    pub fn with_alpha(mut self, alpha: Rational) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_betas(mut self, beta_i: Rational, beta_c: Rational, beta_s: Rational) -> Self {
        self.beta_i = beta_i;
        self.beta_c = beta_c;
        self.beta_s = beta_s;
        self
    }
}

/// Original file size `M` in symbols; always positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FileSize(#[serde(with = "rational::as_num_den")] Rational);

impl FileSize {
    pub fn new(m: Rational) -> Result<Self, Error> {
        if m.is_positive() {
            Ok(Self(m))
        } else {
            Err(Error::InvalidParams(ValidationReport {
                violations: vec![Violation::new("M > 0", format!("M = {}", rational::to_fraction_string(&m)))],
            }))
        }
    }

    pub fn value(&self) -> Rational {
        self.0
    }
}

/// One violated constraint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Constraint name, e.g. `"d ≥ k"`.
    pub name: String,
    pub detail: String,
}

impl Violation {
    pub fn new(name: &str, detail: String) -> Self {
        Self { name: name.to_string(), detail }
    }
}

/// Outcome of [`validate`]: empty means every constraint holds.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn names(&self) -> Vec<&str> {
        self.violations.iter().map(|v| v.name.as_str()).collect()
    }

    pub fn into_result(self) -> Result<(), Error> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(Error::InvalidParams(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{} ({})", v.name, v.detail)?;
        }
        Ok(())
    }
}

/// Check every node and storage/repair constraint; never panics.
pub fn validate(sys: &SystemParams, rep: &RepairParams) -> ValidationReport {
    let mut violations = sys.violations();
    let d = rep.d();

    for (name, value) in [
        ("alpha ≥ 0", rep.alpha),
        ("beta_I ≥ 0", rep.beta_i),
        ("beta_C ≥ 0", rep.beta_c),
        ("beta_S ≥ 0", rep.beta_s),
    ] {
        if !rational::is_non_negative(&value) {
            violations.push(Violation::new(name, rational::to_fraction_string(&value)));
        }
    }
    if sys.cluster_size == 0 || rep.d_i + 1 != sys.cluster_size {
        violations.push(Violation::new(
            "d_I = R − 1",
            format!("d_I={}, R={}", rep.d_i, sys.cluster_size),
        ));
    }
    if rep.beta_i < rep.beta_c {
        violations.push(Violation::new(
            "beta_I ≥ beta_C",
            format!(
                "{} < {}",
                rational::to_fraction_string(&rep.beta_i),
                rational::to_fraction_string(&rep.beta_c)
            ),
        ));
    }
    if d < sys.k {
        violations.push(Violation::new("d ≥ k", format!("{}+{} < {}", rep.d_i, rep.d_c, sys.k)));
    }
    if rep.d_c + sys.cluster_size > sys.n {
        violations.push(Violation::new(
            "d_C ≤ n − R",
            format!("d_C={}, n−R={}", rep.d_c, sys.n as i64 - sys.cluster_size as i64),
        ));
    }
    if d + 1 > sys.n {
        violations.push(Violation::new("d ≤ n − 1", format!("d={d}, n={}", sys.n)));
    }
    ValidationReport { violations }
}

/// Range of `d_C` values `(min, max)` for which `d_I + d_C ≥ k` with `d_I = R − 1`.
pub fn admissible_dc_range(sys: &SystemParams) -> Result<(usize, usize), Error> {
    let lo = (sys.k as i64 - sys.cluster_size as i64 + 1).max(0);
    let hi = sys.n as i64 - sys.cluster_size as i64;
    if lo > hi {
        return Err(Error::NoAdmissibleDc { min: lo, max: hi });
    }
    Ok((lo as usize, hi as usize))
}

/// Values read from a `key=value` parameter file.  Absent keys stay `None`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParamFile {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub clusters: Option<usize>,
    pub cluster_size: Option<usize>,
    pub separate: Option<usize>,
    pub d_c: Option<usize>,
    pub alpha: Option<Rational>,
    pub beta_i: Option<Rational>,
    pub beta_c: Option<Rational>,
    pub beta_s: Option<Rational>,
    pub file_size: Option<Rational>,
}

impl ParamFile {
    /// Parse `key=value` lines; `#` starts a comment.  Keys match the CLI flags
    /// (`n k L R S dC alpha betaI betaC betaS M`).
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut out = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("line {}: expected key=value, got {raw:?}", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            let count = |v: &str| {
                v.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("line {}: {key} must be a non-negative integer", lineno + 1)))
            };
            match key {
                "n" => out.n = Some(count(value)?),
                "k" => out.k = Some(count(value)?),
                "L" => out.clusters = Some(count(value)?),
                "R" => out.cluster_size = Some(count(value)?),
                "S" => out.separate = Some(count(value)?),
                "dC" | "d_C" => out.d_c = Some(count(value)?),
                "alpha" => out.alpha = Some(parse_rational(value)?),
                "betaI" | "beta_I" => out.beta_i = Some(parse_rational(value)?),
                "betaC" | "beta_C" => out.beta_c = Some(parse_rational(value)?),
                "betaS" | "beta_S" => out.beta_s = Some(parse_rational(value)?),
                "M" => out.file_size = Some(parse_rational(value)?),
                other => {
                    return Err(Error::Parse(format!("line {}: unknown key {other:?}", lineno + 1)))
                }
            }
        }
        Ok(out)
    }
}

/// Zero-bandwidth repair parameters for a system, with `d_I = R − 1`.
pub fn repair_params(sys: &SystemParams, d_c: usize) -> RepairParams {
    RepairParams {
        alpha: Rational::zero(),
        d_i: sys.cluster_size.saturating_sub(1),
        beta_i: Rational::zero(),
        d_c,
        beta_c: Rational::zero(),
        beta_s: Rational::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn fig5_repair(d_c: usize) -> RepairParams {
        RepairParams {
            alpha: int(4),
            d_i: 3,
            beta_i: int(4),
            d_c,
            beta_c: int(2),
            beta_s: int(0),
        }
    }

    #[test]
    fn twelve_node_system_is_valid() {
        let sys = SystemParams::new(12, 8, 3, 4, 0);
        assert!(validate(&sys, &fig5_repair(8)).is_ok());
    }

    #[test]
    fn node_count_mismatch_is_reported() {
        let sys = SystemParams::new(12, 8, 3, 4, 1);
        let report = validate(&sys, &fig5_repair(8));
        assert!(report.names().contains(&"n = L·R + S"), "{report}");
    }

    #[test]
    fn too_few_helpers_is_reported() {
        let sys = SystemParams::new(12, 8, 3, 4, 0);
        let report = validate(&sys, &fig5_repair(4));
        assert_eq!(report.names(), vec!["d ≥ k"]);
    }

    #[test]
    fn every_violation_listed() {
        let sys = SystemParams::new(5, 5, 1, 3, 0);
        let rep = RepairParams {
            alpha: int(-1),
            d_i: 1,
            beta_i: int(1),
            d_c: 9,
            beta_c: int(2),
            beta_s: int(0),
        };
        let names = validate(&sys, &rep).names().into_iter().map(String::from).collect::<Vec<_>>();
        for expected in [
            "n = L·R + S",
            "1 ≤ k < n",
            "alpha ≥ 0",
            "d_I = R − 1",
            "beta_I ≥ beta_C",
            "d_C ≤ n − R",
            "d ≤ n − 1",
        ] {
            assert!(names.iter().any(|n| n == expected), "missing {expected}: {names:?}");
        }
    }

    #[test]
    fn dc_ranges() {
        assert_eq!(admissible_dc_range(&SystemParams::new(12, 8, 3, 4, 0)).unwrap(), (5, 8));
        assert_eq!(admissible_dc_range(&SystemParams::new(6, 4, 2, 3, 0)).unwrap(), (2, 3));
        assert!(matches!(
            admissible_dc_range(&SystemParams::new(5, 5, 5, 1, 0)),
            Err(Error::NoAdmissibleDc { min: 5, max: 4 })
        ));
    }

    #[test]
    fn file_size_must_be_positive() {
        assert!(FileSize::new(int(0)).is_err());
        assert_eq!(FileSize::new(int(8)).unwrap().value(), int(8));
    }

    #[test]
    fn param_file_round_trip() {
        let text = "# twelve-node system\nn=12\nk = 8\nL=3\nR=4\nS=0\ndC=8\nbetaI=4\nbetaC=0.5\nbetaS=1/3\nalpha=4\nM=32\n";
        let p = ParamFile::parse(text).unwrap();
        assert_eq!(p.n, Some(12));
        assert_eq!(p.clusters, Some(3));
        assert_eq!(p.beta_c, Some(crate::rational::ratio(1, 2)));
        assert_eq!(p.beta_s, Some(crate::rational::ratio(1, 3)));
        assert_eq!(p.file_size, Some(int(32)));
        assert!(ParamFile::parse("bogus=1").is_err());
        assert!(ParamFile::parse("n").is_err());
        assert!(ParamFile::parse("n=-1").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn validate_is_total(
                n in 0usize..20, k in 0usize..20, l in 0usize..6, r in 0usize..6, s in 0usize..6,
                d_i in 0usize..8, d_c in 0usize..20,
                bi in -3i64..4, bc in -3i64..4, bs in -3i64..4, a in -3i64..8,
            ) {
                let sys = SystemParams::new(n, k, l, r, s);
                let rep = RepairParams { alpha: int(a), d_i, beta_i: int(bi), d_c, beta_c: int(bc), beta_s: int(bs) };
                let report = validate(&sys, &rep);
                // Every reported entry names a constraint.
                prop_assert!(report.violations.iter().all(|v| !v.name.is_empty()));
            }

            #[test]
            fn admissible_degrees_are_accepted(l in 1usize..4, r in 1usize..5, s in 0usize..4, k_raw in 1usize..20) {
                let n = l * r + s;
                prop_assume!(n >= 2);
                let k = 1 + k_raw % (n - 1);
                let sys = SystemParams::new(n, k, l, r, s);
                if let Ok((lo, hi)) = admissible_dc_range(&sys) {
                    for d_c in lo..=hi {
                        let rep = RepairParams { alpha: int(1), d_i: r - 1, beta_i: int(2), d_c, beta_c: int(1), beta_s: int(1) };
                        let report = validate(&sys, &rep);
                        prop_assert!(report.is_ok(), "d_C={} {}", d_c, report);
                    }
                }
            }
        }
    }
}
