//! Discrete Bessel and discrete ₂F₁ kernels on the half-integer lattice,
//! with the Toeplitz symbol coefficients of both models.

mod bessel;
mod halfint;
mod hypergeometric;
mod spec;

use std::collections::HashMap;
use std::sync::Mutex;

use rug::Float;

pub use bessel::{bessel_kernel_entry, bessel_symbol_coeff, BesselLattice};
pub use halfint::HalfInt;
pub use hypergeometric::{h_plus, hyp_kernel_entry, hyp_m_row, hyp_symbol_coeff, HypLattice, M2F1Row};
pub use spec::{HypParams, KernelSpec, PairKind};

use crate::error::Result;
use crate::numerics::ArithContext;
use crate::par;

/// A kernel on the half-integer lattice that can be restricted to windows
/// `{s, s+1, ..., s+size-1}`.
pub trait LatticeKernel: Sync {
    /// Row-major `size × size` restriction starting at `s`.
    fn block(&self, s: HalfInt, size: usize, ctx: &ArithContext) -> Result<Vec<Float>>;

    /// Truncation size the Fredholm driver starts from.
    fn initial_size(&self) -> usize;
}

/// Builds the lattice kernel for a spec.
pub fn lattice_kernel(spec: &KernelSpec) -> Box<dyn LatticeKernel> {
    match spec {
        KernelSpec::Bessel { eta } => Box::new(BesselLattice::new(eta)),
        KernelSpec::Hypergeometric(p) => Box::new(HypLattice::new(p)),
    }
}

/// Per-point data memoized by integer position, valid for one precision.
#[derive(Debug)]
pub(crate) struct PointCache<T> {
    inner: Mutex<(u32, HashMap<i64, T>)>,
}

impl<T> Default for PointCache<T> {
    fn default() -> Self {
        Self { inner: Mutex::new((0, HashMap::new())) }
    }
}

impl<T: Clone + Send> PointCache<T> {
    /// Values for positions `lo..=hi`, computing the missing ones in parallel.
    pub(crate) fn range<F>(&self, lo: i64, hi: i64, ctx: &ArithContext, compute: F) -> Result<Vec<T>>
    where
        F: Fn(i64) -> Result<T> + Sync + Send,
    {
        let missing: Vec<i64> = {
            let mut guard = self.inner.lock().expect("point cache poisoned");
            if guard.0 != ctx.precision_bits() {
                *guard = (ctx.precision_bits(), HashMap::new());
            }
            (lo..=hi).filter(|n| !guard.1.contains_key(n)).collect()
        };
        let fresh = par::try_map(missing.clone(), compute)?;
        let mut guard = self.inner.lock().expect("point cache poisoned");
        if guard.0 == ctx.precision_bits() {
            for (n, value) in missing.into_iter().zip(fresh.iter()) {
                guard.1.insert(n, value.clone());
            }
        }
        let mut fresh = fresh.into_iter();
        let out = (lo..=hi)
            .map(|n| match guard.1.get(&n) {
                Some(v) => v.clone(),
                None => fresh.next().expect("freshly computed point"),
            })
            .collect();
        Ok(out)
    }
}
