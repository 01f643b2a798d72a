//! Quadrature rules on uniform grids.

use num_complex::Complex;

use crate::scalar::{czero, re, Real, C};

/// Filon–Simpson rule for `∫ f(x) cos(t x) dx` over `[a, a + (len−1)·h]`.
///
/// `f` holds samples at `a + k·h`; the panel count `len − 1` must be even. Accuracy
/// depends on how well a piecewise quadratic resolves `f`, not on `t·h`.
pub fn filon_cos<T: Real>(f: &[T], a: T, h: T, t: T) -> T {
    filon_cos_by(f.len(), |k| f[k], a, h, t)
}

/// [`filon_cos`] over `n` samples produced by `f(k)`.
pub fn filon_cos_by<T: Real>(n: usize, f: impl Fn(usize) -> T, a: T, h: T, t: T) -> T {
    assert!(n >= 3 && n % 2 == 1, "Filon rule needs an even panel count");
    let (alpha, beta, gamma) = filon_weights(t * h);
    let last = n - 1;
    let b = a + h * T::of_usize(last);
    let mut even = T::zero();
    let mut odd = T::zero();
    for k in 0..n {
        let c = ((a + h * T::of_usize(k)) * t).cos();
        if k % 2 == 0 {
            even = even + f(k) * c;
        } else {
            odd = odd + f(k) * c;
        }
    }
    let (fa, fb) = (f(0), f(last));
    let half = T::lit(0.5);
    even = even - half * (fa * (a * t).cos() + fb * (b * t).cos());
    h * (alpha * (fb * (b * t).sin() - fa * (a * t).sin()) + beta * even + gamma * odd)
}

fn filon_weights<T: Real>(theta: T) -> (T, T, T) {
    let th = theta.abs();
    if th < T::lit(0.05) {
        let t2 = th * th;
        let t3 = t2 * th;
        let t4 = t2 * t2;
        let t6 = t4 * t2;
        let alpha = T::lit(2.0 / 45.0) * t3 - T::lit(2.0 / 315.0) * t3 * t2 + T::lit(2.0 / 4725.0) * t3 * t4;
        let beta = T::lit(2.0 / 3.0) + T::lit(2.0 / 15.0) * t2 - T::lit(4.0 / 105.0) * t4 + T::lit(2.0 / 567.0) * t6;
        let gamma = T::lit(4.0 / 3.0) - T::lit(2.0 / 15.0) * t2 + T::lit(1.0 / 210.0) * t4 - T::lit(1.0 / 11340.0) * t6;
        let alpha = if theta < T::zero() { -alpha } else { alpha };
        return (alpha, beta, gamma);
    }
    let (s, c) = theta.sin_cos();
    let two = T::lit(2.0);
    let t2 = theta * theta;
    let t3 = t2 * theta;
    let alpha = T::one() / theta + (two * theta).sin() / (two * t2) - two * s * s / t3;
    let beta = two * ((T::one() + c * c) / t2 - (two * theta).sin() / t3);
    let gamma = T::lit(4.0) * (s / t3 - c / t2);
    (alpha, beta, gamma)
}

/// Running integral `∫₀^{u_k} g` on a uniform grid, each panel `[k, k+1]`
/// integrating the quintic through nodes `k−2..=k+3`:
/// `h/1440·(11g_{k−2} − 93g_{k−1} + 802g_k + 802g_{k+1} − 93g_{k+2} + 11g_{k+3})`.
///
/// `g[k]` samples the integrand at `k·h`; `before` holds the samples at `−2h` and
/// `−h`. The result has two entries fewer than `g` (look-ahead nodes).
pub fn cumulative<T: Real>(g: &[C<T>], before: [C<T>; 2], h: T) -> Vec<C<T>> {
    assert!(g.len() >= 4, "cumulative rule needs at least four samples");
    let at = |k: isize| -> C<T> {
        if k < 0 {
            before[(k + 2) as usize]
        } else {
            g[k as usize]
        }
    };
    let w = re(h / T::lit(1440.0));
    let (w11, w93, w802) = (re(T::lit(11.0)), re(T::lit(93.0)), re(T::lit(802.0)));
    let mut out = Vec::with_capacity(g.len() - 2);
    out.push(czero());
    let mut acc = czero();
    for k in 0..(g.len() - 3) as isize {
        let panel = w11 * (at(k - 2) + at(k + 3)) - w93 * (at(k - 1) + at(k + 2)) + w802 * (at(k) + at(k + 1));
        acc = acc + w * panel;
        out.push(acc);
    }
    out
}

/// `∫₀^{x·h} f` where `f[k]` samples the integrand at `k·h` and `x` may be fractional.
///
/// Whole panels use composite Simpson (closing with the 3/8 rule on an odd count);
/// a trailing fractional panel integrates the local cubic interpolant. Needs at
/// least four samples and `x ≤ len − 1`.
pub fn integrate_to<T: Real>(f: &[C<T>], h: T, x: T) -> C<T> {
    let n = f.len();
    assert!(n >= 4, "need at least four samples");
    assert!(x >= T::zero() && x <= T::of_usize(n - 1), "upper limit outside the sampled range");
    let m = x.floor().to_usize().expect("finite position").min(n - 1);
    let frac = x - T::of_usize(m);
    let mut total = whole_panels(f, m);
    if frac > T::zero() {
        total = total + partial_panel(f, m, frac);
    }
    total * re(h)
}

/// Composite rule over `[0, m]` in units of the grid step.
fn whole_panels<T: Real>(f: &[C<T>], m: usize) -> C<T> {
    match m {
        0 => czero(),
        1 => {
            // Cubic through nodes 0..=3 integrated over the first panel.
            (f[0] * re(T::lit(9.0)) + f[1] * re(T::lit(19.0)) - f[2] * re(T::lit(5.0)) + f[3]) * re(T::lit(1.0 / 24.0))
        }
        _ if m.is_multiple_of(2) => simpson(&f[..=m]),
        _ => {
            let head = simpson(&f[..=m - 3]);
            let t = &f[m - 3..=m];
            head + (t[0] + t[1] * re(T::lit(3.0)) + t[2] * re(T::lit(3.0)) + t[3]) * re(T::lit(3.0 / 8.0))
        }
    }
}

fn simpson<T: Real>(f: &[C<T>]) -> C<T> {
    let last = f.len() - 1;
    if last == 0 {
        return czero();
    }
    let mut acc = f[0] + f[last];
    for (k, v) in f.iter().enumerate().take(last).skip(1) {
        let w = if k % 2 == 1 { T::lit(4.0) } else { T::lit(2.0) };
        acc = acc + *v * re(w);
    }
    acc * re(T::lit(1.0 / 3.0))
}

fn stencil_start(n: usize, m: usize) -> usize {
    m.saturating_sub(1).min(n - 4)
}

/// `∫_m^{m+frac}` of the cubic interpolating four nodes around panel `m`.
fn partial_panel<T: Real>(f: &[C<T>], m: usize, frac: T) -> C<T> {
    let j0 = stencil_start(f.len(), m);
    let nodes: [T; 4] = std::array::from_fn(|i| T::of_usize(j0 + i) - T::of_usize(m));
    let mut acc = czero();
    for i in 0..4 {
        let w = lagrange_integral(&nodes, i, frac);
        acc = acc + f[j0 + i] * re(w);
    }
    acc
}

/// `∫₀^b ℓ_i(y) dy` for the Lagrange basis polynomial `ℓ_i` on `nodes`.
fn lagrange_integral<T: Real>(nodes: &[T; 4], i: usize, b: T) -> T {
    // ℓ_i(y) = Π_{j≠i} (y − n_j)/(n_i − n_j); expand the numerator as a cubic.
    let mut poly = [T::one(), T::zero(), T::zero(), T::zero()];
    let mut denom = T::one();
    let mut deg = 0;
    for (j, &nj) in nodes.iter().enumerate() {
        if j == i {
            continue;
        }
        denom = denom * (nodes[i] - nj);
        for k in (0..=deg).rev() {
            poly[k + 1] = poly[k + 1] + poly[k];
            poly[k] = -poly[k] * nj;
        }
        deg += 1;
    }
    let mut integral = T::zero();
    let mut bp = b;
    for (k, c) in poly.iter().enumerate() {
        integral = integral + *c * bp / T::of_usize(k + 1);
        bp = bp * b;
    }
    integral / denom
}

/// Cubic Lagrange interpolation of samples `f[k]` at fractional position `x`.
pub fn interpolate<T: Real>(f: &[C<T>], x: T) -> C<T> {
    let n = f.len();
    assert!(n >= 4, "need at least four samples");
    let m = x.floor().to_usize().expect("finite position").min(n - 1);
    let frac = x - T::of_usize(m);
    if frac == T::zero() {
        return f[m];
    }
    let j0 = stencil_start(n, m);
    let y = T::of_usize(m) + frac;
    let mut acc = czero();
    for i in 0..4 {
        let mut w = T::one();
        for j in 0..4 {
            if j != i {
                w = w * (y - T::of_usize(j0 + j)) / (T::of_usize(j0 + i) - T::of_usize(j0 + j));
            }
        }
        acc = acc + f[j0 + i] * re(w);
    }
    acc
}

/// Samples a real function into complex form, for use with the rules above.
pub fn sample<T: Real>(n: usize, h: T, f: impl Fn(T) -> Complex<T>) -> Vec<C<T>> {
    (0..n).map(|k| f(h * T::of_usize(k))).collect()
}
