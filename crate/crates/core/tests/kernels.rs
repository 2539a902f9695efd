mod common;

use common::*;
use gapflow::kernels::*;
use gapflow::numerics::*;
use rug::ops::Pow;
use rug::{Complex, Float};

fn ctx() -> ArithContext {
    ArithContext::new(PREC).unwrap()
}

fn hyp(z: f64, zp: f64, xi: f64, ctx: &ArithContext) -> HypParams {
    HypParams::new(ctx.complex(z), ctx.complex(zp), ctx.real(xi)).unwrap()
}

#[test]
fn bessel_symbol_coefficients() {
    let ctx = ctx();
    let eta = ctx.real(1);
    assert_eq!(bessel_symbol_coeff(0, &eta, &ctx).unwrap(), bessel_i(0, &ctx.real(2), &ctx).unwrap());
    assert_eq!(bessel_symbol_coeff(-3, &eta, &ctx).unwrap(), bessel_symbol_coeff(3, &eta, &ctx).unwrap());
    assert!(bessel_symbol_coeff(1, &ctx.zero(), &ctx).unwrap().is_zero());
}

/// Fourier coefficient `(1/2π)∫ (1+√ξ e^{iθ})^z (1+√ξ e^{-iθ})^{z'} e^{-ikθ} dθ`.
fn symbol_coefficient(k: i64, params: &HypParams) -> Complex {
    let root = Float::with_val(PREC, params.xi().sqrt_ref());
    periodic_mean_complex(512, PREC, |theta| {
        let e =
            Complex::with_val(PREC, (Float::with_val(PREC, theta.cos_ref()), Float::with_val(PREC, theta.sin_ref())));
        let e_inv = Complex::with_val(PREC, e.conj_ref());
        let a = (Complex::with_val(PREC, &e * &root) + 1u32).ln() * params.z();
        let b = (Complex::with_val(PREC, &e_inv * &root) + 1u32).ln() * params.zprime();
        let phase = Complex::with_val(PREC, (Float::new(PREC), Float::with_val(PREC, theta * -k)));
        (a + b + phase).exp()
    })
}

#[test]
fn hyp_symbol_coefficients_against_contour_quadrature() {
    let ctx = ctx();
    let params = hyp(0.3, 0.7, 0.5, &ctx);
    let tol = Float::with_val(PREC, 1e-50);
    for k in -3i64..=3 {
        let ours = hyp_symbol_coeff(k, &params, &ctx).unwrap();
        // the coefficients carry (-z)_k/k!, an alternating-sign rescaling of
        // the binomial expansion of the symbol
        let mut oracle = symbol_coefficient(k, &params);
        if k % 2 != 0 {
            oracle = -oracle;
        }
        assert!(cabsdiff(&ours, &oracle) <= tol, "k={k}");
    }
    let t0 = hyp_symbol_coeff(0, &params, &ctx).unwrap();
    let f0 = gauss_2f1(&ctx.complex(-0.3), &ctx.complex(-0.7), &ctx.complex(1), &ctx.complex(0.5), &ctx).unwrap();
    assert!(cabsdiff(&t0, &f0) <= ctx.eps());
    let tiny = hyp(0.3, 0.7, 1e-30, &ctx);
    let t0 = hyp_symbol_coeff(0, &tiny, &ctx).unwrap();
    assert!(cabsdiff(&t0, &ctx.complex(1)) <= Float::with_val(PREC, 1e-28));
}

#[test]
fn bessel_off_diagonal_by_substitution() {
    let ctx = ctx();
    let eta = ctx.real(1);
    let u = ctx.real(2);
    let j = |n: i32| bessel_j(&ctx.real(n), &u, &ctx).unwrap();
    let entry = bessel_kernel_entry(HalfInt::HALF, HalfInt::new(1), &eta, &ctx).unwrap();
    let expected = -(j(0) * j(2) - j(1) * j(1));
    assert!(absdiff(&entry, &expected) <= ctx.eps());
}

#[test]
fn bessel_diagonal_matches_summation_form() {
    let ctx = ctx();
    let tol = Float::with_val(PREC, 1e-45);
    for eta in [0.5, 1.0, 2.0] {
        let e = ctx.real(eta);
        let u = Float::with_val(PREC, &e * 2u32);
        for n in 0..4i64 {
            let x = HalfInt::new(n);
            let diag = bessel_kernel_entry(x, x, &e, &ctx).unwrap();
            // Σ_{m ∈ ℤ'₊} J_{x+m}(2η)²
            let mut sum = ctx.zero();
            for m in 0..120 {
                let order = ctx.real(n + 1 + m);
                sum += bessel_j(&order, &u, &ctx).unwrap().square();
            }
            assert!(absdiff(&diag, &sum) <= tol, "eta={eta} x={x}");
            // the diagonal is the limit of the off-diagonal quotient
            let y = x + 1;
            let off = bessel_kernel_entry(x, y, &e, &ctx).unwrap();
            let sum_off: Float = (0..120)
                .map(|m| {
                    let a = bessel_j(&ctx.real(n + 1 + m), &u, &ctx).unwrap();
                    let b = bessel_j(&ctx.real(n + 2 + m), &u, &ctx).unwrap();
                    a * b
                })
                .fold(ctx.zero(), |acc, t| acc + t);
            assert!(absdiff(&off, &sum_off) <= tol);
        }
    }
}

#[test]
fn m_row_has_unit_determinant_off_the_lattice() {
    let ctx = ctx();
    for (z, zp, xi) in [(0.3, 0.7, 0.5), (2.5, 2.5, 0.85)] {
        let params = hyp(z, zp, xi, &ctx);
        for zeta in [0.25, 1.3, 2.7, 4.1] {
            let row = hyp_m_row(&ctx.real(zeta), &params, &ctx, true).unwrap();
            let det = row.det().unwrap();
            let tol = ctx.eps() * 100u32 * Float::with_val(PREC, row.m11.abs_ref()).max(&ctx.one());
            assert!(cabsdiff(&det, &ctx.complex(1)) <= tol, "({z},{zp},{xi}) zeta={zeta}");
        }
    }
    let params = HypParams::new(ctx.complex((1.5, 0.5)), ctx.complex((1.5, -0.5)), ctx.real(0.4)).unwrap();
    let row = hyp_m_row(&ctx.real(0.6), &params, &ctx, true).unwrap();
    assert!(cabsdiff(&row.det().unwrap(), &ctx.complex(1)) <= ctx.eps() * 100u32);
}

#[test]
fn m_row_factors_at_z2_5_xi0_85_match_continuation() {
    let ctx = ctx();
    let params = hyp(2.5, 2.5, 0.85, &ctx);
    let row = hyp_m_row(&ctx.real(1.5), &params, &ctx, false).unwrap();
    let xi = ctx.real(0.85);
    let target = Float::with_val(PREC, &xi / Float::with_val(PREC, &xi - 1u32));
    let m11 = ode_2f1_negative(-2.5, -2.5, 2.0, &target, PREC);
    assert!(absdiff(row.m11.real(), &m11) <= Float::with_val(PREC, 1e-50) * Float::with_val(PREC, m11.abs_ref()));
    let f21 = ode_2f1_negative(-1.5, -1.5, 3.0, &target, PREC);
    let pre = Float::with_val(PREC, &xi * 6.25).sqrt() / Float::with_val(PREC, 1u32 - &xi);
    let m21 = -(pre * f21) / 2u32;
    assert!(absdiff(row.m21.real(), &m21) <= Float::with_val(PREC, 1e-50) * Float::with_val(PREC, m21.abs_ref()));
    // ξ → 0: m11 → 1, m21 → 0
    let small = hyp(0.3, 0.7, 1e-40, &ctx);
    let row = hyp_m_row(&ctx.real(0.5), &small, &ctx, false).unwrap();
    assert!(cabsdiff(&row.m11, &ctx.complex(1)) <= Float::with_val(PREC, 1e-38));
    assert!(Float::with_val(PREC, row.m21.abs_ref()) <= Float::with_val(PREC, 1e-19));
}

#[test]
fn h_plus_against_direct_products() {
    let ctx = ctx();
    let params = hyp(0.25, 0.75, 0.5, &ctx);
    let (z, zp, xi) = (ctx.real(0.25), ctx.real(0.75), ctx.real(0.5));
    let h = h_plus(HalfInt::HALF, &params, &ctx).unwrap();
    // h_+(1/2)² = (zz'ξ)^{1/2} (1-ξ)^{z+z'}
    let expected = (Float::with_val(PREC, &z * &zp) * &xi).sqrt() * Float::with_val(PREC, 1u32 - &xi);
    assert!(absdiff(&h.square(), &expected) <= ctx.eps());

    let x = HalfInt::new(2); // 5/2
    let h = h_plus(x, &params, &ctx).unwrap();
    assert!(h > 0);
    // (zz')^{1/2} ξ^x (1-ξ)^{z+z'} (z+1)(z+2)(z'+1)(z'+2) / (2!)²
    let mut sq = Float::with_val(PREC, &z * &zp).sqrt();
    sq *= Float::with_val(PREC, 0.5).pow(&Float::with_val(PREC, 2.5));
    sq *= Float::with_val(PREC, 1u32 - &xi);
    for j in 1..=2u32 {
        sq *= Float::with_val(PREC, &z + j) * Float::with_val(PREC, &zp + j);
    }
    sq /= 4u32;
    assert!(absdiff(&h.square(), &sq) <= ctx.eps());
    assert!(h_plus(HalfInt::new(3), &hyp(0.25, 0.75, 1e-60, &ctx), &ctx).unwrap() < Float::with_val(PREC, 1e-100));
}

#[test]
fn kernel_diagonals_lie_in_the_unit_interval_and_entries_are_symmetric() {
    let ctx = ctx();
    let specs = [
        KernelSpec::bessel(ctx.real(1)).unwrap(),
        KernelSpec::bessel(ctx.real(2.5)).unwrap(),
        KernelSpec::Hypergeometric(hyp(0.3, 0.7, 0.5, &ctx)),
        KernelSpec::Hypergeometric(hyp(2.5, 2.5, 0.85, &ctx)),
        KernelSpec::Hypergeometric(
            HypParams::new(ctx.complex((1.5, 0.5)), ctx.complex((1.5, -0.5)), ctx.real(0.4)).unwrap(),
        ),
    ];
    for spec in &specs {
        let entry = |x: HalfInt, y: HalfInt| match spec {
            KernelSpec::Bessel { eta } => bessel_kernel_entry(x, y, eta, &ctx).unwrap(),
            KernelSpec::Hypergeometric(p) => hyp_kernel_entry(x, y, p, &ctx).unwrap(),
        };
        let mut diag_sum = ctx.zero();
        for n in 0..12 {
            let x = HalfInt::new(n);
            let d = entry(x, x);
            assert!((0..=1).contains(&d), "{spec} x={x} diag={}", d.to_f64());
            diag_sum += &d;
            let y = HalfInt::new(n + 3);
            assert!(absdiff(&entry(x, y), &entry(y, x)) <= ctx.eps());
        }
        assert!(diag_sum.is_finite());
    }
}

#[test]
fn hypergeometric_kernel_rejects_the_negative_lattice() {
    let ctx = ctx();
    let params = hyp(0.3, 0.7, 0.5, &ctx);
    assert!(hyp_kernel_entry(HalfInt::new(-1), HalfInt::HALF, &params, &ctx).is_err());
}

#[test]
fn hypergeometric_entries_approach_bessel_entries() {
    let ctx = ctx();
    let eta = ctx.real(1);
    let points = [(0i64, 0i64), (0, 1), (1, 1), (2, 4)];
    let mut previous: Option<Vec<Float>> = None;
    for n in [10u32, 20, 40] {
        let xi = Float::with_val(PREC, 1u32) / (n * n);
        let params = HypParams::new(ctx.complex(n), ctx.complex(n), xi).unwrap();
        let diffs: Vec<Float> = points
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (HalfInt::new(a), HalfInt::new(b));
                let h = hyp_kernel_entry(x, y, &params, &ctx).unwrap();
                let j = bessel_kernel_entry(x, y, &eta, &ctx).unwrap();
                absdiff(&h, &j)
            })
            .collect();
        if let Some(prev) = &previous {
            for (d, p) in diffs.iter().zip(prev) {
                assert!(d < p, "N={n}: {} !< {}", d.to_f64(), p.to_f64());
            }
        }
        previous = Some(diffs);
    }
}
