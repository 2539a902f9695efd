mod common;

use common::*;
use gapflow::determinants::*;
use gapflow::kernels::*;
use gapflow::numerics::*;
use gapflow::oracles::*;
use gapflow::painleve::*;
use proptest::prelude::*;
use rug::{Complex, Float};

fn ctx() -> ArithContext {
    ArithContext::new(PREC).unwrap()
}

/// Exactly representable values in `(lo, hi)` on a grid of `1/64`.
fn dyadic(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    ((lo * 64.0) as i64 + 1..(hi * 64.0) as i64).prop_map(|n| n as f64 / 64.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn halfint_display_round_trips(n in -1000i64..1000) {
        let s = HalfInt::new(n);
        prop_assert_eq!(s.to_string().parse::<HalfInt>().unwrap(), s);
        prop_assert_eq!(s + 1 - s, 1);
    }

    #[test]
    fn bessel_reflection(n in 0i32..8, u in dyadic(0.0, 12.0)) {
        let ctx = ctx();
        let pos = bessel_j(&ctx.real(n), &ctx.real(u), &ctx).unwrap();
        let neg = bessel_j(&ctx.real(-n), &ctx.real(u), &ctx).unwrap();
        let expected = if n % 2 == 0 { pos } else { -pos };
        prop_assert!(absdiff(&neg, &expected) <= ctx.eps());
    }

    #[test]
    fn pfaff_agrees_inside_the_disc(a in dyadic(-3.0, 3.0), b in dyadic(-3.0, 3.0), c in dyadic(0.2, 4.0), xi in dyadic(0.0, 0.45)) {
        let ctx = ctx();
        let xi_c = ctx.complex(xi);
        let arg = Complex::with_val(PREC, &xi_c / Complex::with_val(PREC, &xi_c - 1u32));
        let direct = gauss_2f1(&ctx.complex(a), &ctx.complex(b), &ctx.complex(c), &arg, &ctx).unwrap();
        let pf = gauss_2f1_pfaff(&ctx.complex(a), &ctx.complex(b), &ctx.complex(c), &xi_c, &ctx).unwrap();
        let scale = Float::with_val(PREC, direct.abs_ref()).max(&ctx.one());
        prop_assert!(cabsdiff(&direct, &pf) <= ctx.eps() * 64u32 * scale);
    }

    #[test]
    fn bessel_tables_are_distribution_functions(eta in dyadic(0.1, 3.0)) {
        let ctx = ctx();
        let e = ctx.real(eta);
        let rec = dp2_gap_series(&e, 15, &ctx).unwrap();
        rec.check_invariants(&ctx.eps()).unwrap();
        let top = gap_table(&KernelSpec::bessel(e).unwrap(), 15, Method::Toeplitz, &ctx, &f(1e-20)).unwrap();
        for k in 0..=15 {
            prop_assert!(absdiff(&rec.values[k], &top.values[k]) < f(1e-30));
        }
    }

    #[test]
    fn ratio_identity_for_random_eta(eta in dyadic(0.2, 3.0)) {
        let ctx = ctx();
        let e = ctx.real(eta);
        let symbol = ToeplitzSymbol::new(&KernelSpec::bessel(e.clone()).unwrap(), 11, &ctx).unwrap();
        let p: Vec<Float> = (0..=11).map(|k| symbol.gap(k, &ctx).unwrap()).collect();
        let xs = dp2_orbit(&e, 10, &ctx).unwrap();
        for k in 1..=10 {
            let lhs = Float::with_val(PREC, &p[k + 1] * &p[k - 1]) / Float::with_val(PREC, p[k].square_ref());
            let rhs = 1u32 - Float::with_val(PREC, xs[k].square_ref());
            prop_assert!(absdiff(&lhs, &rhs) < f(1e-30));
        }
    }

    #[test]
    fn dpv_round_trip(base in 0i32..3, fz in dyadic(0.05, 0.95), fzp in dyadic(0.05, 0.95), xi in dyadic(0.05, 0.9)) {
        // z, z' strictly inside the same unit interval
        let ctx = ctx();
        let params = HypParams::new(ctx.complex(base as f64 + fz), ctx.complex(base as f64 + fzp), ctx.real(xi)).unwrap();
        let orbit = match dp5_orbit(&params, 4, &ctx) {
            Ok(o) => o,
            Err(gapflow::GapError::Degeneracy(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        for pair in orbit.windows(2) {
            let back = dp5_back_step(&pair[1], &ctx).unwrap();
            let scale = Float::with_val(PREC, pair[0].alpha.abs_ref()).max(&ctx.one());
            prop_assert!(cabsdiff(&back.alpha, &pair[0].alpha) <= ctx.eps() * 100u32 * scale);
        }
    }

    #[test]
    fn lis_of_reversal_and_identity(n in 1usize..40) {
        let up: Vec<i64> = (1..=n as i64).collect();
        let down: Vec<i64> = up.iter().rev().copied().collect();
        prop_assert_eq!(lis_length(&up).unwrap(), n);
        prop_assert_eq!(lis_length(&down).unwrap(), 1);
    }

    #[test]
    fn hook_dim_is_transpose_invariant(parts in proptest::collection::vec(1u32..6, 0..6)) {
        let mut parts = parts;
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let lambda = Partition::new(parts).unwrap();
        let transpose: Vec<u32> = (0..lambda.first_row()).map(|j| lambda.column_len(j)).collect();
        let t = Partition::new(transpose).unwrap();
        prop_assert_eq!(hook_dim(&lambda), hook_dim(&t));
        prop_assert!(hook_dim(&lambda) >= 1);
    }
}
