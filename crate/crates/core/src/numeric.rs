//! Small numerical kernels shared by the solvers: bracketed bisection,
//! a complex `expm1`, 2x2 real solves, adaptive Gauss-Kronrod quadrature
//! and fixed-significance number formatting.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Bisection on a sign-changing bracket, stopping when the bracket width
/// falls below `rel_tol * |hi|`.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if !(f_lo.is_finite() && f_hi.is_finite()) || f_lo.signum() == f_hi.signum() {
        return Err(Error::BracketFailure { lo, hi });
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= rel_tol * hi.abs().max(lo.abs()) || mid == lo || mid == hi {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `e^z - 1` without cancellation for small `|z|`.
pub fn expm1(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    let half_sin = (0.5 * y).sin();
    Complex64::new(
        x.exp_m1() * y.cos() - 2.0 * half_sin * half_sin,
        x.exp() * y.sin(),
    )
}

/// `(e^{s h} - 1) / s`, i.e. the integral of `e^{s y}` over `[0, h]`.
pub fn exp_integral(s: Complex64, h: f64) -> Complex64 {
    let sh = s * h;
    if sh.norm() < 1e-12 {
        h * (Complex64::new(1.0, 0.0) + 0.5 * sh)
    } else {
        expm1(sh) / s
    }
}

/// Solves the real 2x2 system `m * x = rhs`. Returns `None` when the
/// determinant vanishes relative to the entries.
pub fn solve2(m: [[f64; 2]; 2], rhs: [f64; 2]) -> Option<[f64; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let scale = m.iter().flatten().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if !det.is_finite() || det.abs() <= 1e-300 || det.abs() < 1e-15 * scale * scale {
        return None;
    }
    Some([
        (rhs[0] * m[1][1] - rhs[1] * m[0][1]) / det,
        (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det,
    ])
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let f_c = f(c);
    let mut kronrod = f_c * KRONROD_WEIGHTS[7];
    let mut gauss = f_c * GAUSS_WEIGHTS[3];
    let mut abs = f_c.norm() * KRONROD_WEIGHTS[7];
    for j in 0..7 {
        let dx = h * GK_NODES[j];
        let (lo, hi) = (f(c - dx), f(c + dx));
        kronrod += (lo + hi) * KRONROD_WEIGHTS[j];
        abs += (lo.norm() + hi.norm()) * KRONROD_WEIGHTS[j];
        if j % 2 == 1 {
            gauss += (lo + hi) * GAUSS_WEIGHTS[j / 2];
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).norm(), abs * h.abs())
}

/// Adaptive 15-point Gauss-Kronrod quadrature of a complex integrand.
///
/// The interval is first cut into `panels` equal pieces (use roughly one
/// panel per oscillation for oscillatory integrands), then each piece is
/// bisected until its error estimate drops below its share of `abs_tol` or
/// reaches the rounding level of the panel.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    panels: usize,
    abs_tol: f64,
) -> Complex64 {
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    let tol = abs_tol / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == panels { b } else { lo + width };
            adapt(&f, lo, hi, tol, 0)
        })
        .sum()
}

fn adapt<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Complex64 {
    let (value, err, abs) = gk15(f, a, b);
    if err <= tol || err <= 50.0 * f64::EPSILON * abs || depth >= 20 {
        return value;
    }
    let mid = 0.5 * (a + b);
    adapt(f, a, mid, 0.5 * tol, depth + 1) + adapt(f, mid, b, 0.5 * tol, depth + 1)
}

/// Formats `x` with `digits` significant digits, switching to exponent
/// notation outside `[1e-4, 1e9)`.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let exp = x.abs().log10().floor() as i32;
    // log10 rounding can be off by one near powers of ten
    let sci = format!("{:.*e}", digits - 1, x);
    let exp_actual: i32 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .unwrap_or(exp);
    if (-4..9).contains(&exp_actual) {
        let decimals = (digits as i32 - 1 - exp_actual).max(0) as usize;
        format!("{:.*}", decimals, x)
    } else {
        sci
    }
}
