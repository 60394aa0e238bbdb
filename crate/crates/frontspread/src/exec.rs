//! Execution shim: data-parallel kernels with a sequential fallback.
//!
//! Every hot loop in the crate (grid stencil updates, domain-expansion fills)
//! is an embarrassingly parallel indexed map, so a single helper covers them
//! all.  With the `parallel` feature it runs on rayon; without it it compiles
//! to a plain loop.  Both paths produce bit-identical results because every
//! element is written independently.

/// Minimum chunk length handed to a rayon worker.  Stencil updates are a few
/// flops per element, so fine-grained splitting would be pure overhead.
#[cfg(feature = "parallel")]
const MIN_CHUNK: usize = 4096;

/// Fills `out[i] = f(i)` for all `i`.
#[cfg(feature = "parallel")]
pub(crate) fn fill_indexed<F>(out: &mut [f64], f: F)
where
    F: Fn(usize) -> f64 + Sync,
{
    use rayon::prelude::*;
    out.par_iter_mut()
        .with_min_len(MIN_CHUNK)
        .enumerate()
        .for_each(|(i, v)| *v = f(i));
}

/// Fills `out[i] = f(i)` for all `i` (sequential fallback).
#[cfg(not(feature = "parallel"))]
pub(crate) fn fill_indexed<F>(out: &mut [f64], f: F)
where
    F: Fn(usize) -> f64 + Sync,
{
    for (i, v) in out.iter_mut().enumerate() {
        *v = f(i);
    }
}
