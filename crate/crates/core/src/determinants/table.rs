use std::fmt;
use std::str::FromStr;

use rug::Float;

use super::fredholm::{fredholm_gap_with, TruncationReport, DEFAULT_TRUNCATION_CAP};
use super::toeplitz::ToeplitzSymbol;
use crate::error::{GapError, Result};
use crate::kernels::{lattice_kernel, HalfInt, KernelSpec};
use crate::numerics::ArithContext;
use crate::painleve::{dp2_gap_series, dp5_gap_series};
use crate::par;

/// Route used to produce a [`GapTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Toeplitz,
    Fredholm,
    Recurrence,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Toeplitz, Method::Fredholm, Method::Recurrence];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Toeplitz => "toeplitz",
            Method::Fredholm => "fredholm",
            Method::Recurrence => "recurrence",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = GapError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "toeplitz" => Ok(Method::Toeplitz),
            "fredholm" => Ok(Method::Fredholm),
            "recurrence" => Ok(Method::Recurrence),
            other => Err(GapError::InvalidParameter(format!("unknown method `{other}`"))),
        }
    }
}

/// `k ↦ D_{k+1/2}` for `k = 0..=k_max`, with provenance.
#[derive(Debug, Clone)]
pub struct GapTable {
    pub spec: KernelSpec,
    pub method: Method,
    pub precision_bits: u32,
    pub values: Vec<Float>,
    /// Fredholm truncation per entry; `None` for other methods.
    pub truncation: Vec<Option<TruncationReport>>,
    /// Free-form per-entry annotations (e.g. saturation of a recurrence).
    pub notes: Vec<String>,
}

impl GapTable {
    pub fn new(spec: KernelSpec, method: Method, precision_bits: u32, values: Vec<Float>) -> Self {
        let n = values.len();
        Self { spec, method, precision_bits, values, truncation: vec![None; n], notes: vec![String::new(); n] }
    }

    pub fn k_max(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    /// Checks `0 < D <= 1` and monotonicity, each up to `slack`.
    pub fn check_invariants(&self, slack: &Float) -> Result<()> {
        for (k, v) in self.values.iter().enumerate() {
            if !(*v > 0) {
                return Err(GapError::InvariantViolation(format!("D at k={k} is not positive ({})", v.to_f64())));
            }
            if Float::with_val(v.prec(), v - 1u32) > *slack {
                return Err(GapError::InvariantViolation(format!("D at k={k} exceeds 1 ({})", v.to_f64())));
            }
        }
        for (k, w) in self.values.windows(2).enumerate() {
            if Float::with_val(w[0].prec(), &w[0] - &w[1]) > *slack {
                return Err(GapError::InvariantViolation(format!("D decreases between k={k} and k={}", k + 1)));
            }
        }
        Ok(())
    }

    /// Per-entry metadata string for tabular output.
    pub fn meta(&self, k: usize) -> String {
        let mut parts = Vec::new();
        if let Some(Some(t)) = self.truncation.get(k) {
            parts.push(format!("M={}", t.size));
            parts.push(format!("tail={}", t.tail.to_string_radix(10, Some(6))));
        }
        if let Some(note) = self.notes.get(k) {
            if !note.is_empty() {
                parts.push(note.clone());
            }
        }
        parts.join(";")
    }
}

/// Fills a [`GapTable`] for `k = 0..=k_max` by the given method. `tol` is
/// the Fredholm truncation tolerance.
pub fn gap_table(spec: &KernelSpec, k_max: usize, method: Method, ctx: &ArithContext, tol: &Float) -> Result<GapTable> {
    match method {
        Method::Toeplitz => {
            let symbol = ToeplitzSymbol::new(spec, k_max, ctx)?;
            let values = par::try_map((0..=k_max).collect(), |k| symbol.gap(k, ctx))?;
            Ok(GapTable::new(spec.clone(), method, ctx.precision_bits(), values))
        }
        Method::Fredholm => {
            let kernel = lattice_kernel(spec);
            let mut values = Vec::with_capacity(k_max + 1);
            let mut reports = Vec::with_capacity(k_max + 1);
            for k in 0..=k_max {
                let (v, r) =
                    fredholm_gap_with(kernel.as_ref(), HalfInt::from_index(k), tol, DEFAULT_TRUNCATION_CAP, ctx)?;
                values.push(v);
                reports.push(Some(r));
            }
            let mut table = GapTable::new(spec.clone(), method, ctx.precision_bits(), values);
            table.truncation = reports;
            Ok(table)
        }
        Method::Recurrence => match spec {
            KernelSpec::Bessel { eta } => dp2_gap_series(eta, k_max, ctx),
            KernelSpec::Hypergeometric(p) => dp5_gap_series(p, k_max, ctx),
        },
    }
}
