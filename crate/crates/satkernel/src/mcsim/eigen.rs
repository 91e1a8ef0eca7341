//! Eigenvalues of complex Hermitian matrices: Householder reduction to a
//! real symmetric tridiagonal matrix followed by implicit QL.

use crate::error::{numerical, Result};

/// Dense Hermitian matrix, column-major, real and imaginary parts split.
/// Both triangles are filled on input; the reduction only touches the lower one.
#[derive(Debug, Clone)]
pub struct Hermitian {
    n: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Hermitian {
    pub fn zeros(n: usize) -> Self {
        Hermitian { n, re: vec![0.0; n * n], im: vec![0.0; n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Sets the real diagonal entry (i, i).
    pub fn set_diag(&mut self, i: usize, v: f64) {
        self.re[i * self.n + i] = v;
        self.im[i * self.n + i] = 0.0;
    }

    /// Sets entry (i, j) = re + i·im and its mirror, i ≠ j.
    pub fn set(&mut self, i: usize, j: usize, re: f64, im: f64) {
        let n = self.n;
        self.re[j * n + i] = re;
        self.im[j * n + i] = im;
        self.re[i * n + j] = re;
        self.im[i * n + j] = -im;
    }

    pub fn get(&self, i: usize, j: usize) -> (f64, f64) {
        (self.re[j * self.n + i], self.im[j * self.n + i])
    }

    /// Ascending eigenvalues. Consumes the matrix as workspace.
    pub fn eigenvalues(mut self) -> Result<Vec<f64>> {
        let (mut d, mut e) = self.tridiagonalize();
        tridiagonal_ql(&mut d, &mut e)?;
        d.sort_by(f64::total_cmp);
        Ok(d)
    }

    /// Reduces to T = Qᴴ A Q with real diagonal `d` and real subdiagonal `e`.
    /// Each reflector I − τvvᴴ maps the column below the diagonal onto β·e₁
    /// with β real, so the phases are absorbed into Q and T comes out real.
    fn tridiagonalize(&mut self) -> (Vec<f64>, Vec<f64>) {
        let n = self.n;
        let mut d = vec![0.0; n];
        let mut e = vec![0.0; n.saturating_sub(1)];
        let (mut vr, mut vi) = (vec![0.0; n], vec![0.0; n]);
        let (mut pr, mut pi) = (vec![0.0; n], vec![0.0; n]);
        for k in 0..n.saturating_sub(1) {
            d[k] = self.re[k * n + k];
            let s = k + 1;
            let m = n - s;
            let col = k * n;
            let (ar, ai) = (self.re[col + s], self.im[col + s]);
            let xnorm2: f64 = (s + 1..n).map(|i| self.re[col + i].powi(2) + self.im[col + i].powi(2)).sum();
            if xnorm2 == 0.0 && ai == 0.0 {
                e[k] = ar;
                continue;
            }
            let beta = -ar.signum() * (ar * ar + ai * ai + xnorm2).sqrt();
            // τ = (β − α)/β, v = x/(α − β) with v₀ = 1
            let (tr, ti) = ((beta - ar) / beta, -ai / beta);
            let (dr, di) = (ar - beta, ai);
            let den = dr * dr + di * di;
            vr[0] = 1.0;
            vi[0] = 0.0;
            for i in 1..m {
                let (xr, xi) = (self.re[col + s + i], self.im[col + s + i]);
                vr[i] = (xr * dr + xi * di) / den;
                vi[i] = (xi * dr - xr * di) / den;
            }
            e[k] = beta;

            // p = τ A₂₂ v, reading only the lower triangle
            pr[..m].fill(0.0);
            pi[..m].fill(0.0);
            for j in 0..m {
                let (xr, xi) = (vr[j], vi[j]);
                let c = (s + j) * n + s;
                let (cr, ci) = (&self.re[c + j + 1..c + m], &self.im[c + j + 1..c + m]);
                let (vtr, vti) = (&vr[j + 1..m], &vi[j + 1..m]);
                let (ptr, pti) = (&mut pr[j + 1..m], &mut pi[j + 1..m]);
                let (mut dr, mut di) = (0.0, 0.0);
                let it = cr.iter().zip(ci).zip(vtr.iter().zip(vti)).zip(ptr.iter_mut().zip(pti.iter_mut()));
                for (((&ar, &ai), (&ur, &ui)), (qr, qi)) in it {
                    *qr += ar * xr - ai * xi;
                    *qi += ar * xi + ai * xr;
                    dr += ar * ur + ai * ui;
                    di += ar * ui - ai * ur;
                }
                let diag = self.re[c + j];
                pr[j] += diag * xr + dr;
                pi[j] += diag * xi + di;
            }
            for i in 0..m {
                let (a, b) = (pr[i], pi[i]);
                pr[i] = tr * a - ti * b;
                pi[i] = tr * b + ti * a;
            }
            // w = p − ½τ(pᴴv)v
            let (mut hr, mut hi) = (0.0, 0.0);
            for i in 0..m {
                hr += pr[i] * vr[i] + pi[i] * vi[i];
                hi += pr[i] * vi[i] - pi[i] * vr[i];
            }
            let (cr, ci) = (-0.5 * (tr * hr - ti * hi), -0.5 * (tr * hi + ti * hr));
            for i in 0..m {
                let (a, b) = (vr[i], vi[i]);
                pr[i] += cr * a - ci * b;
                pi[i] += cr * b + ci * a;
            }
            // A₂₂ ← A₂₂ − v wᴴ − w vᴴ on the lower triangle
            for j in 0..m {
                let c = (s + j) * n + s;
                let (wjr, wji, vjr, vji) = (pr[j], -pi[j], vr[j], -vi[j]);
                let (cr, ci) = (&mut self.re[c..c + m], &mut self.im[c..c + m]);
                let it = cr[j..].iter_mut().zip(ci[j..].iter_mut()).zip(vr[j..m].iter().zip(&vi[j..m])).zip(pr[j..m].iter().zip(&pi[j..m]));
                for (((ar, ai), (&xr, &xi)), (&yr, &yi)) in it {
                    *ar -= xr * wjr - xi * wji + yr * vjr - yi * vji;
                    *ai -= xr * wji + xi * wjr + yr * vji + yi * vjr;
                }
            }
        }
        if n > 0 {
            d[n - 1] = self.re[(n - 1) * n + n - 1];
        }
        (d, e)
    }
}

/// Eigenvalues of the symmetric tridiagonal matrix (d, e) in place, by QL
/// with implicit Wilkinson shifts.
pub fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    let mut off = e.to_vec();
    off.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return numerical(format!("QL iteration did not converge at index {l}"), off[l].abs());
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let mut h = Hermitian::zeros(2);
        h.set_diag(0, 1.0);
        h.set_diag(1, -1.0);
        h.set(1, 0, 0.6, 0.8);
        let ev = h.eigenvalues().unwrap();
        let r = 2f64.sqrt();
        assert!((ev[0] + r).abs() < 1e-14 && (ev[1] - r).abs() < 1e-14);
    }

    #[test]
    fn trace_and_frobenius_are_preserved() {
        let n = 9;
        let mut h = Hermitian::zeros(n);
        let mut tr = 0.0;
        let mut fro = 0.0;
        for i in 0..n {
            let x = (i as f64 * 0.7).sin();
            h.set_diag(i, x);
            tr += x;
            fro += x * x;
            for j in 0..i {
                let (a, b) = (((i * j) as f64 * 0.31).cos(), (i as f64 - j as f64 * 1.3).sin());
                h.set(i, j, a, b);
                fro += 2.0 * (a * a + b * b);
            }
        }
        let ev = h.eigenvalues().unwrap();
        assert!((ev.iter().sum::<f64>() - tr).abs() < 1e-12);
        assert!((ev.iter().map(|x| x * x).sum::<f64>() - fro).abs() < 1e-11);
    }
}
