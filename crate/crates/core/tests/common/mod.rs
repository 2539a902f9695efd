#![allow(dead_code)]

use rug::ops::Pow;
use rug::{Complex, Float};

pub const PREC: u32 = 256;

pub fn f(v: f64) -> Float {
    Float::with_val(PREC, v)
}

pub fn absdiff(a: &Float, b: &Float) -> Float {
    Float::with_val(a.prec(), a - b).abs()
}

pub fn cabsdiff(a: &Complex, b: &Complex) -> Float {
    Float::with_val(a.prec().0, Complex::with_val(a.prec(), a - b).abs_ref())
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, rug::float::Constant::Pi)
}

/// Trapezoid rule on `n` equally spaced nodes over one period `[0, 2π)`,
/// divided by `2π`: the mean of a periodic function.
pub fn periodic_mean<F: Fn(&Float) -> Float>(n: u32, prec: u32, g: F) -> Float {
    let step = pi(prec) * 2u32 / n;
    let mut acc = Float::new(prec);
    for j in 0..n {
        acc += g(&Float::with_val(prec, &step * j));
    }
    acc / n
}

pub fn periodic_mean_complex<F: Fn(&Float) -> Complex>(n: u32, prec: u32, g: F) -> Complex {
    let step = pi(prec) * 2u32 / n;
    let mut acc = Complex::new(prec);
    for j in 0..n {
        acc += g(&Float::with_val(prec, &step * j));
    }
    acc / n
}

/// Tanh-sinh quadrature of a function smooth on the open interval `(a, b)`.
pub fn tanh_sinh<F: Fn(&Float) -> Float>(a: &Float, b: &Float, prec: u32, g: F) -> Float {
    let half_pi = pi(prec) / 2u32;
    let mid = Float::with_val(prec, a + b) / 2u32;
    let rad = Float::with_val(prec, b - a) / 2u32;
    let h = Float::with_val(prec, Float::i_exp(1, -7));
    let tiny = Float::with_val(prec, Float::i_exp(1, -(prec as i32) - 20));
    let mut acc = Float::new(prec);
    let mut j: i64 = 0;
    loop {
        let t = Float::with_val(prec, &h * j);
        let sh = Float::with_val(prec, t.sinh_ref()) * &half_pi;
        let ch = Float::with_val(prec, t.cosh_ref()) * &half_pi;
        let cosh_sh = Float::with_val(prec, sh.cosh_ref());
        let w = ch / Float::with_val(prec, cosh_sh.square_ref()) * &rad;
        if w < tiny {
            break;
        }
        let off = Float::with_val(prec, sh.tanh_ref()) * &rad;
        let right = Float::with_val(prec, &mid + &off);
        let left = Float::with_val(prec, &mid - &off);
        if j == 0 {
            acc += g(&mid) * &w;
        } else {
            if right < *b {
                acc += g(&right) * &w;
            }
            if left > *a {
                acc += g(&left) * &w;
            }
        }
        j += 1;
    }
    acc * h
}

/// `F(a, b; c; u)` and its derivative by the plain power series, `|u| < 1`,
/// real parameters.
pub fn series_2f1(a: &Float, b: &Float, c: &Float, u: &Float, prec: u32) -> (Float, Float) {
    let mut term = Float::with_val(prec, 1);
    let mut value = Float::with_val(prec, 1);
    let mut deriv = Float::new(prec);
    let tiny = Float::with_val(prec, Float::i_exp(1, -(prec as i32) - 10));
    let mut n = 0u32;
    loop {
        // term = (a)_n (b)_n u^n / ((c)_n n!)
        let ratio =
            Float::with_val(prec, a + n) * Float::with_val(prec, b + n) / (Float::with_val(prec, c + n) * (n + 1));
        let next = Float::with_val(prec, &term * &ratio);
        deriv += Float::with_val(prec, &next * (n + 1));
        term = next * u;
        value += &term;
        n += 1;
        if n > 10 && Float::with_val(prec, term.abs_ref()) < tiny {
            break;
        }
    }
    (value, deriv)
}

/// `F(a, b; c; u)` for `u < 0` by analytic continuation of the hypergeometric
/// equation `u(1-u)F'' + (c - (a+b+1)u)F' - abF = 0` from `u = -1/4` with
/// Taylor steps of half the distance to the singular point at 0.
pub fn ode_2f1_negative(a: f64, b: f64, c: f64, target: &Float, prec: u32) -> Float {
    let (a, b, c) = (Float::with_val(prec, a), Float::with_val(prec, b), Float::with_val(prec, c));
    let mut u = Float::with_val(prec, -0.25);
    let (mut y, mut dy) = series_2f1(&a, &b, &c, &u, prec);
    let ab = Float::with_val(prec, &a * &b);
    let apb1 = Float::with_val(prec, &a + &b) + 1u32;
    let tiny = Float::with_val(prec, Float::i_exp(1, -(prec as i32) - 10));
    while u > *target {
        let mut h = -Float::with_val(prec, u.abs_ref()) / 2u32;
        if Float::with_val(prec, &u + &h) < *target {
            h = Float::with_val(prec, target - &u);
        }
        // p2 = A + Bw - w², p1 = C + Dw
        let big_a = Float::with_val(prec, 1u32 - &u) * &u;
        let big_b = 1u32 - Float::with_val(prec, &u * 2u32);
        let big_c = Float::with_val(prec, &c - Float::with_val(prec, &apb1 * &u));
        let big_d = -apb1.clone();
        let mut coef = vec![y.clone(), dy.clone()];
        let mut n = 0usize;
        loop {
            let nf = n as u32;
            let t1 = Float::with_val(prec, &big_b * nf) + &big_c;
            let t1 = t1 * (nf + 1) * &coef[n + 1];
            let mut t0 = Float::with_val(prec, &big_d * nf) - &ab;
            t0 -= nf * nf.saturating_sub(1);
            let t0 = t0 * &coef[n];
            let next = -(t1 + t0) / (Float::with_val(prec, &big_a * (nf + 2)) * (nf + 1));
            coef.push(next);
            n += 1;
            let size =
                Float::with_val(prec, coef[n + 1].abs_ref()) * Float::with_val(prec, h.abs_ref()).pow(n as u32 + 1);
            if n > 20 && size < tiny {
                break;
            }
        }
        let mut value = Float::new(prec);
        let mut deriv = Float::new(prec);
        for (j, cj) in coef.iter().enumerate().rev() {
            if j >= 1 {
                deriv = deriv * &h + Float::with_val(prec, cj * j as u32);
            }
            value = value * &h + cj;
        }
        y = value;
        dy = deriv;
        u += &h;
    }
    y
}
