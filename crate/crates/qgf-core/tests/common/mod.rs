#![allow(dead_code)]

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Li_s(z) from the Bose-Einstein integral (1/Γ(s))∫ t^{s-1} z e^{-t}/(1 - z e^{-t}) dt.
///
/// For s ≤ 0 the integrand is differentiated once in z, which raises the
/// order by one: Li_s = (1/Γ(s+1))∫ t^s z e^{-t}/(1 - z e^{-t})² dt.
/// On [0, 1] the substitution t = u^{1/p} removes the t^{p-1} endpoint singularity.
pub fn polylog_oracle(s: f64, z: f64) -> f64 {
    let (p, raised) = if s > 0.0 { (s, false) } else { (s + 1.0, true) };
    let h = move |t: f64| {
        let w = z * (-t).exp();
        if raised {
            w / ((1.0 - w) * (1.0 - w))
        } else {
            w / (1.0 - w)
        }
    };
    let integrate = |f: &dyn Fn(f64) -> f64, a: f64, b: f64| quadrature::double_exponential::integrate(f, a, b, 1e-15).integral;
    let head = integrate(&|u: f64| h(u.powf(1.0 / p)), 0.0, 1.0) / p;
    let knee = if z < 0.0 { (-z).ln().max(1.0) } else { 1.0 };
    let g = |t: f64| t.powf(p - 1.0) * h(t);
    let mut total = head + integrate(&g, 1.0, knee);
    let mut a = knee;
    for width in [2.0, 8.0, 30.0, 60.0] {
        total += integrate(&g, a, a + width);
        a += width;
    }
    total / libm::tgamma(p)
}

/// Least-squares slope of ln y against ln x.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

pub fn geomspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a * (b / a).powf(i as f64 / (n - 1) as f64)).collect()
}

/// Smallest eigenvalue of [[a, b], [b, c]] with its unit eigenvector.
pub fn min_eig(a: f64, b: f64, c: f64) -> (f64, (f64, f64)) {
    let lam = 0.5 * (a + c) - (0.25 * (a - c).powi(2) + b * b).sqrt();
    let (vx, vy) = if b != 0.0 {
        (b, lam - a)
    } else if a <= c {
        (1.0, 0.0)
    } else {
        (0.0, 1.0)
    };
    let n = vx.hypot(vy);
    (lam, (vx / n, vy / n))
}

/// Sample covariance [var_x, cov, var_y] of pairs.
pub fn sample_cov(pts: &[(f64, f64)]) -> [f64; 3] {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let mut out = [0.0; 3];
    for (x, y) in pts {
        out[0] += (x - mx).powi(2);
        out[1] += (x - mx) * (y - my);
        out[2] += (y - my).powi(2);
    }
    out.map(|v| v / (n - 1.0))
}
