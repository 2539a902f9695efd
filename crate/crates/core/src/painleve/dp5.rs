use rug::{Complex, Float};

use super::dp2::RECURRENCE_GUARD_BITS;
use super::guard::avoid;
use crate::determinants::{GapTable, Method, ToeplitzSymbol};
use crate::error::{GapError, Result};
use crate::kernels::{HalfInt, HypParams, KernelSpec};
use crate::numerics::{gauss_2f1, ArithContext};

/// State `(s, α_s, b_s, β_s)` of the dPV recurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct DP5State {
    pub s: HalfInt,
    pub alpha: Complex,
    pub b: Complex,
    pub beta: Complex,
    pub params: HypParams,
}

/// Parameters at working precision, plus `s + 1/2`.
struct Local {
    z: Complex,
    zp: Complex,
    xi: Complex,
    prec: u32,
}

impl Local {
    fn new(params: &HypParams, ctx: &ArithContext) -> Self {
        Self {
            z: ctx.complex(params.z()),
            zp: ctx.complex(params.zprime()),
            xi: ctx.complex_from_real(&ctx.real(params.xi())),
            prec: ctx.precision_bits(),
        }
    }

    fn c(&self, v: impl Into<f64>) -> Complex {
        Complex::with_val(self.prec, v.into())
    }

    /// `1 - ξ α`.
    fn one_minus_xi(&self, alpha: &Complex) -> Complex {
        1 - Complex::with_val(self.prec, &self.xi * alpha)
    }
}

fn describe(params: &HypParams, s: HalfInt) -> String {
    format!("{params} s={s}")
}

impl DP5State {
    /// `c_s = b_s + (z'+s+1/2)/(1-ξα_s) + z`.
    pub fn c(&self, ctx: &ArithContext) -> Complex {
        let l = Local::new(&self.params, ctx);
        let num = Complex::with_val(l.prec, &l.zp + self.s.ceil());
        let mut c = num / l.one_minus_xi(&self.alpha);
        c += &self.b;
        c += &l.z;
        c
    }

    /// `d_s = b_s - (z+s-1/2)/(1-α_s) + z`.
    pub fn d(&self, ctx: &ArithContext) -> Complex {
        let l = Local::new(&self.params, ctx);
        let num = Complex::with_val(l.prec, &l.z + self.s.floor());
        let den = 1 - Complex::with_val(l.prec, &self.alpha);
        let mut d = Complex::with_val(l.prec, &self.b - num / den);
        d += &l.z;
        d
    }
}

fn f(a: &Complex, b: &Complex, c: i64, xi: &Complex, ctx: &ArithContext) -> Result<Complex> {
    gauss_2f1(a, b, &ctx.complex(c), xi, ctx)
}

/// State at `s = 1/2` from the hypergeometric initial conditions; the `c`
/// view is checked against its independent closed form.
pub fn dp5_init(params: &HypParams, ctx: &ArithContext) -> Result<DP5State> {
    let l = Local::new(params, ctx);
    let prec = l.prec;
    let (z, zp, xi) = (&l.z, &l.zp, &l.xi);
    let neg_z = Complex::with_val(prec, -z);
    let neg_zp = Complex::with_val(prec, -zp);
    let one_m_z = Complex::with_val(prec, 1 - z);
    let one_m_zp = Complex::with_val(prec, 1 - zp);

    let f_a = f(&one_m_z, &neg_zp, 1, xi, ctx)?;
    let f_b = f(&one_m_z, &one_m_zp, 2, xi, ctx)?;
    let f_c = f(&neg_z, &neg_zp, 1, xi, ctx)?;
    let who = || describe(params, HalfInt::HALF);
    let zero = l.c(0.0);
    avoid(&f_b, &zero, ctx, "dp5_init: F(1-z,1-z';2;ξ) = 0", who)?;
    avoid(&f_c, &zero, ctx, "dp5_init: F(-z,-z';1;ξ) = 0", who)?;
    avoid(&f_a, &zero, ctx, "dp5_init: F(1-z,-z';1;ξ) = 0", who)?;

    let zp_xi = Complex::with_val(prec, zp * xi);
    let alpha = -(Complex::with_val(prec, &f_a / &zp_xi) / &f_b);
    let b = -(Complex::with_val(prec, z * &f_a) / &f_c);
    let zzp_xi = Complex::with_val(prec, z * zp) * xi;
    let root = Complex::with_val(prec, zzp_xi.sqrt());
    let one_m_xi = Complex::with_val(prec, 1 - xi);
    let power = (Complex::with_val(prec, z + zp) * one_m_xi.ln()).exp();
    let beta = -(root * power / Complex::with_val(prec, z * &f_a));
    let state = DP5State { s: HalfInt::HALF, alpha, b, beta, params: params.clone() };

    // closed form of c_{1/2} via contiguous relations
    let neg_zp_m1 = Complex::with_val(prec, &neg_zp - 1u32);
    let f_d = f(&neg_z, &neg_zp_m1, 1, xi, ctx)?;
    let f_e = f(&one_m_z, &neg_zp, 2, xi, ctx)?;
    avoid(&f_e, &zero, ctx, "dp5_init: F(1-z,-z';2;ξ) = 0", who)?;
    let closed = Complex::with_val(prec, zp * &f_d) * &f_b / (Complex::with_val(prec, &f_c * &f_e));
    let view = state.c(ctx);
    let scale = Float::with_val(prec, closed.abs_ref()).max(&Float::with_val(prec, 1));
    let gap = Float::with_val(prec, Complex::with_val(prec, &view - &closed).abs_ref());
    if gap > ctx.guard_threshold() * scale {
        return Err(GapError::InvariantViolation(format!(
            "c_1/2 from the state differs from its closed form by {:e}",
            gap.to_f64()
        )));
    }
    Ok(state)
}

/// One forward step `s -> s+1` of the dPV recurrence, guarded by the
/// genericity conditions.
pub fn dp5_step(state: &DP5State, ctx: &ArithContext) -> Result<DP5State> {
    let l = Local::new(&state.params, ctx);
    let prec = l.prec;
    let s = state.s;
    let who = || describe(&state.params, s);
    let (z, zp, xi) = (&l.z, &l.zp, &l.xi);
    let alpha = ctx.complex(&state.alpha);

    let one_m_xa = l.one_minus_xi(&alpha);
    avoid(&one_m_xa, &l.c(0.0), ctx, "dp5_step: ξα_s = 1", who)?;
    let zp_s = Complex::with_val(prec, zp + s.ceil()); // z' + s + 1/2
    let zzp_s = Complex::with_val(prec, &zp_s + z); // z + z' + s + 1/2
    let c = state.c(ctx);
    avoid(&c, &l.c(0.0), ctx, "dp5_step: c_s = 0", who)?;
    avoid(&c, zp, ctx, "dp5_step: c_s = z'", who)?;
    avoid(&c, &zp_s, ctx, "dp5_step: c_s = z'+s+1/2", who)?;
    avoid(&c, &zzp_s, ctx, "dp5_step: c_s = z+z'+s+1/2", who)?;

    let xi_a = Complex::with_val(prec, xi * &alpha);
    let num = Complex::with_val(prec, &c - &zzp_s) * Complex::with_val(prec, &c - &zp_s);
    let den = Complex::with_val(prec, &xi_a * &c) * Complex::with_val(prec, &c - zp);
    let alpha_next = num / den;

    let one_m_a_next = Complex::with_val(prec, 1 - &alpha_next);
    avoid(&one_m_a_next, &l.c(0.0), ctx, "dp5_step: α_{s+1} = 1", who)?;
    let z_s = Complex::with_val(prec, z + s.ceil());
    let mut b_next = Complex::with_val(prec, -&state.b);
    b_next -= Complex::with_val(prec, &zp_s / &one_m_xa);
    b_next += Complex::with_val(prec, &z_s / &one_m_a_next);
    b_next -= Complex::with_val(prec, z * 2u32);
    b_next += zp;

    let ratio = Complex::with_val(prec, &xi_a * &c) / Complex::with_val(prec, &c - &zp_s);
    let beta_next = ratio * &state.beta;
    Ok(DP5State { s: s + 1, alpha: alpha_next, b: b_next, beta: beta_next, params: state.params.clone() })
}

/// The inverse map `s+1 -> s`.
pub fn dp5_back_step(state: &DP5State, ctx: &ArithContext) -> Result<DP5State> {
    if state.s == HalfInt::HALF {
        return Err(GapError::Domain("dp5_back_step cannot go below s = 1/2".into()));
    }
    let l = Local::new(&state.params, ctx);
    let prec = l.prec;
    let s = state.s - 1; // target index
    let who = || describe(&state.params, state.s);
    let (z, zp, xi) = (&l.z, &l.zp, &l.xi);
    let a1 = ctx.complex(&state.alpha);

    let one_m_a1 = Complex::with_val(prec, 1 - &a1);
    avoid(&one_m_a1, &l.c(0.0), ctx, "dp5_back_step: α_{s+1} = 1", who)?;
    let z_s = Complex::with_val(prec, z + s.ceil()); // z + s + 1/2
                                                     // d_{s+1} = E + z with E = b_{s+1} - (z+s+1/2)/(1-α_{s+1})
    let e = Complex::with_val(prec, &state.b - Complex::with_val(prec, &z_s / &one_m_a1));
    let d1 = Complex::with_val(prec, &e + z);
    let s_half = l.c(s.ceil() as f64);
    avoid(&d1, &l.c(0.0), ctx, "dp5_back_step: d_{s+1} = 0", who)?;
    avoid(&d1, zp, ctx, "dp5_back_step: d_{s+1} = z'", who)?;
    avoid(&d1, &Complex::with_val(prec, -&s_half), ctx, "dp5_back_step: d_{s+1} = -(s+1/2)", who)?;
    avoid(&d1, &Complex::with_val(prec, -&z_s), ctx, "dp5_back_step: d_{s+1} = -(z+s+1/2)", who)?;

    let f1 = Complex::with_val(prec, &d1 + &s_half); // E + z + s + 1/2
    let f2 = Complex::with_val(prec, &d1 + &z_s); // E + 2z + s + 1/2
    let den = Complex::with_val(prec, xi * &a1) * &d1 * Complex::with_val(prec, &d1 - zp);
    let alpha = Complex::with_val(prec, &f1 * &f2) / den;

    let one_m_xa = l.one_minus_xi(&alpha);
    avoid(&one_m_xa, &l.c(0.0), ctx, "dp5_back_step: ξα_s = 1", who)?;
    let zp_s = Complex::with_val(prec, zp + s.ceil());
    let mut b = Complex::with_val(prec, -&state.b);
    b += Complex::with_val(prec, &z_s / &one_m_a1);
    b -= Complex::with_val(prec, &zp_s / &one_m_xa);
    b -= Complex::with_val(prec, z * 2u32);
    b += zp;

    let beta = Complex::with_val(prec, &a1 * &d1) / &f2 * &state.beta;
    Ok(DP5State { s, alpha, b, beta, params: state.params.clone() })
}

/// `(α_s, b_s, β_s)` for `s = 1/2, ..., 1/2 + steps`.
pub fn dp5_orbit(params: &HypParams, steps: usize, ctx: &ArithContext) -> Result<Vec<DP5State>> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(dp5_init(params, ctx)?);
    for _ in 0..steps {
        let next = dp5_step(out.last().expect("non-empty orbit"), ctx)?;
        out.push(next);
    }
    Ok(out)
}

/// `(x_n, y_n)` for `n = 0..=n_max`, coded directly from the two-variable
/// form of the recurrence with its own hypergeometric initial values.
pub fn two_variable_orbit(params: &HypParams, n_max: usize, ctx: &ArithContext) -> Result<Vec<(Complex, Complex)>> {
    let l = Local::new(params, ctx);
    let prec = l.prec;
    let (z, zp, xi) = (&l.z, &l.zp, &l.xi);
    let zero = l.c(0.0);
    let one_m_z = Complex::with_val(prec, 1 - z);
    let one_m_zp = Complex::with_val(prec, 1 - zp);
    let neg_z = Complex::with_val(prec, -z);
    let neg_zp = Complex::with_val(prec, -zp);
    let neg_zp_m1 = Complex::with_val(prec, &neg_zp - 1u32);

    let who = |n: usize| format!("{params} n={n}");
    let f_num = f(&one_m_z, &neg_zp, 1, xi, ctx)?;
    let f_den = f(&one_m_z, &one_m_zp, 2, xi, ctx)?;
    avoid(&f_den, &zero, ctx, "two_variable_orbit: F(1-z,1-z';2;ξ) = 0", || who(0))?;
    let x0 = -(f_num / (Complex::with_val(prec, zp * xi) * &f_den));
    let g1 = f(&neg_z, &neg_zp_m1, 1, xi, ctx)?;
    let g2 = f(&neg_z, &neg_zp, 1, xi, ctx)?;
    let g3 = f(&one_m_z, &neg_zp, 2, xi, ctx)?;
    let den = Complex::with_val(prec, &g2 * &g3);
    avoid(&den, &zero, ctx, "two_variable_orbit: F(-z,-z';1;ξ)F(1-z,-z';2;ξ) = 0", || who(0))?;
    let y0 = Complex::with_val(prec, zp * &g1) * &f_den / den;

    let mut out = vec![(x0, y0)];
    for n in 0..n_max {
        let (x, y) = out.last().expect("non-empty orbit");
        avoid(x, &zero, ctx, "two_variable_orbit: x_n = 0", || who(n))?;
        avoid(y, &zero, ctx, "two_variable_orbit: y_n = 0", || who(n))?;
        avoid(y, zp, ctx, "two_variable_orbit: y_n = z'", || who(n))?;
        let np1 = (n + 1) as u32;
        let t1 = Complex::with_val(prec, y - Complex::with_val(prec, z + zp)) - np1;
        let t2 = Complex::with_val(prec, y - zp) - np1;
        let den = Complex::with_val(prec, xi * x) * y * Complex::with_val(prec, y - zp);
        let x_next = t1 * t2 / den;
        let one_m_x = Complex::with_val(prec, 1 - &x_next);
        let one_m_xx = 1 - Complex::with_val(prec, xi * &x_next);
        avoid(&one_m_x, &zero, ctx, "two_variable_orbit: x_{n+1} = 1", || who(n))?;
        avoid(&one_m_xx, &zero, ctx, "two_variable_orbit: ξx_{n+1} = 1", || who(n))?;
        let mut y_next = Complex::with_val(prec, -y);
        y_next += Complex::with_val(prec, z + np1) / one_m_x;
        y_next += Complex::with_val(prec, zp + (np1 + 1)) / one_m_xx;
        y_next += zp;
        out.push((x_next, y_next));
    }
    Ok(out)
}

/// Right-hand side of the ratio-of-differences identity at index `k`.
pub(crate) fn ratio_rhs(
    k: usize,
    (xk, yk): (&Complex, &Complex),
    (xk1, yk1): (&Complex, &Complex),
    params: &HypParams,
    ctx: &ArithContext,
) -> Result<Complex> {
    let l = Local::new(params, ctx);
    let prec = l.prec;
    let (z, zp, xi) = (&l.z, &l.zp, &l.xi);
    let zero = l.c(0.0);
    let kk = k as u32;
    let one_m_xk = 1 - Complex::with_val(prec, xi * xk);
    let one_m_xk1 = 1 - Complex::with_val(prec, xi * xk1);
    let yk_zp = Complex::with_val(prec, yk - zp);
    let top = Complex::with_val(prec, &one_m_xk * &yk_zp) - Complex::with_val(prec, z + (kk + 1));
    let bottom =
        Complex::with_val(prec, &one_m_xk1 * Complex::with_val(prec, yk1 - zp)) - Complex::with_val(prec, z + (kk + 2));
    let who = || format!("{params} k={k}");
    avoid(&bottom, &zero, ctx, "ratio identity: denominator factor = 0", who)?;
    let mut num = Complex::with_val(prec, z + (kk + 2)) * Complex::with_val(prec, zp + (kk + 2));
    num *= Complex::with_val(prec, yk - zp) - (kk + 1);
    let mut den = Complex::with_val(prec, &one_m_xk1 * &one_m_xk);
    den *= xk;
    den *= yk;
    den *= Complex::with_val(prec, yk_zp.square_ref());
    avoid(&den, &zero, ctx, "ratio identity: product denominator = 0", who)?;
    Ok(top / bottom * num / den)
}

/// `q_0, ..., q_{k_max}`: three Toeplitz seeds, then the ratio-of-differences
/// recurrence driven by the dPV orbit.
///
/// As for the Bessel series, once `1 - q_k <= eps` the remaining entries are
/// set to 1; the orbit is only advanced while it is still needed.
pub fn dp5_gap_series(params: &HypParams, k_max: usize, ctx: &ArithContext) -> Result<GapTable> {
    let work = ctx.widened(RECURRENCE_GUARD_BITS);
    let prec = work.precision_bits();
    let spec = KernelSpec::Hypergeometric(params.clone());
    let seeds = k_max.min(2);
    let symbol = ToeplitzSymbol::new(&spec, seeds, &work)?;
    let mut qs: Vec<Complex> = Vec::with_capacity(k_max + 1);
    for k in 0..=seeds {
        qs.push(work.complex_from_real(&symbol.gap(k, &work)?));
    }
    let saturation = ctx.eps();
    let saturated = |q: &Complex| Float::with_val(prec, 1u32 - q.real()) <= saturation;
    let mut notes = vec![String::new(); k_max + 1];
    if k_max > 2 && !saturated(&qs[2]) {
        let view = |st: &DP5State| (st.alpha.clone(), st.c(&work));
        let mut state = dp5_init(params, &work)?;
        let mut cur = view(&state);
        let rho = |a: &Complex, b: &Complex| Complex::with_val(prec, b / a);
        let mut rho_next = rho(&qs[1], &qs[2]);
        let mut delta = Complex::with_val(prec, rho(&qs[0], &qs[1]) - &rho_next);
        for k in 0..=k_max - 3 {
            if saturated(&qs[k + 2]) {
                break;
            }
            if delta.real().is_zero() && delta.imag().is_zero() {
                return Err(GapError::DegenerateDifference { k });
            }
            state = dp5_step(&state, &work)?;
            let next = view(&state);
            let r = ratio_rhs(k, (&cur.0, &cur.1), (&next.0, &next.1), params, &work)?;
            if Float::with_val(prec, r.abs_ref()) <= work.guard_threshold() {
                return Err(GapError::DegenerateDifference { k });
            }
            delta /= r;
            rho_next -= &delta;
            let q = Complex::with_val(prec, &qs[k + 2] * &rho_next);
            qs.push(q);
            cur = next;
        }
    }
    if qs.len() <= k_max {
        let at = qs.len() - 1;
        for note in &mut notes[qs.len()..] {
            *note = format!("saturated@{at}");
        }
        qs.resize(k_max + 1, work.complex(1));
    }
    let mut values = Vec::with_capacity(qs.len());
    for (k, q) in qs.into_iter().enumerate() {
        let mag = Float::with_val(prec, q.abs_ref());
        if Float::with_val(prec, q.imag().abs_ref()) > work.guard_threshold() * mag {
            return Err(GapError::PrecisionInsufficient(format!("q_{k} from the recurrence is not real")));
        }
        if !(*q.real() > 0) {
            return Err(GapError::InvariantViolation(format!("q_{k} is not positive")));
        }
        values.push(ctx.real(q.real()));
    }
    let mut table = GapTable::new(spec, Method::Recurrence, ctx.precision_bits(), values);
    table.notes = notes;
    Ok(table)
}

/// `max_k |LHS - RHS|` of the ratio-of-differences identity for
/// `k = 0..=k_max`, with `q` from Toeplitz determinants and `(x, y)` from
/// [`two_variable_orbit`].
pub fn dp5_ratio_residual(params: &HypParams, k_max: usize, ctx: &ArithContext) -> Result<Float> {
    let spec = KernelSpec::Hypergeometric(params.clone());
    let prec = ctx.precision_bits();
    let symbol = ToeplitzSymbol::new(&spec, k_max + 3, ctx)?;
    let qs = crate::par::try_map((0..=k_max + 3).collect(), |k| symbol.gap(k, ctx))?;
    let orbit = two_variable_orbit(params, k_max + 1, ctx)?;
    let rho: Vec<Float> = qs.windows(2).map(|w| Float::with_val(prec, &w[1] / &w[0])).collect();
    let mut worst = ctx.zero();
    for k in 0..=k_max {
        let lhs = Float::with_val(prec, &rho[k] - &rho[k + 1]) / Float::with_val(prec, &rho[k + 1] - &rho[k + 2]);
        let (xk, yk) = &orbit[k];
        let (xk1, yk1) = &orbit[k + 1];
        let rhs = ratio_rhs(k, (xk, yk), (xk1, yk1), params, ctx)?;
        let diff = Float::with_val(prec, Complex::with_val(prec, rhs - lhs).abs_ref());
        if diff > worst {
            worst = diff;
        }
    }
    Ok(worst)
}
