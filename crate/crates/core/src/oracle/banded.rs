//! Banded complex Hermitian matrices: inertia counting, bisection for
//! eigenvalues in an interval, inverse iteration for eigenvectors.

use num_complex::Complex64;

/// Hermitian matrix stored by its lower band: `lower[i][d] = a(i, i - d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianBand {
    n: usize,
    bandwidth: usize,
    lower: Vec<Complex64>,
}

impl HermitianBand {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        HermitianBand {
            n,
            bandwidth,
            lower: vec![Complex64::new(0.0, 0.0); n * (bandwidth + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    /// Entry `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if i >= j {
            let d = i - j;
            if d > self.bandwidth {
                return Complex64::new(0.0, 0.0);
            }
            self.lower[i * (self.bandwidth + 1) + d]
        } else {
            self.get(j, i).conj()
        }
    }

    /// Sets `(i, j)` for `i >= j`; the mirrored entry follows.
    pub(crate) fn set_lower(&mut self, i: usize, j: usize, v: Complex64) {
        let d = i - j;
        assert!(d <= self.bandwidth, "entry ({i}, {j}) outside the band");
        self.lower[i * (self.bandwidth + 1) + d] = v;
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..self.n {
            let j0 = i.saturating_sub(self.bandwidth);
            let j1 = (i + self.bandwidth).min(self.n - 1);
            let r: f64 = (j0..=j1).filter(|&j| j != i).map(|j| self.get(i, j).norm()).sum();
            let c = self.get(i, i).re;
            lo = lo.min(c - r);
            hi = hi.max(c + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues below `sigma`, from the signs of the pivots of
    /// `A - σ I = L D L^H` (Sylvester's law of inertia).
    pub fn count_below(&self, sigma: f64) -> usize {
        let b = self.bandwidth;
        let w = b + 1;
        // l[i * w + d] = L(i, i - d) for d = 1..=b
        let mut l = vec![Complex64::new(0.0, 0.0); self.n * w];
        let mut dv = vec![0.0f64; self.n];
        let tiny = f64::EPSILON * (1.0 + sigma.abs());
        let mut negatives = 0;
        for i in 0..self.n {
            let j0 = i.saturating_sub(b);
            for j in j0..i {
                let mut s = self.get(i, j);
                for k in j0.max(j.saturating_sub(b))..j {
                    s -= l[i * w + (i - k)] * l[j * w + (j - k)].conj() * dv[k];
                }
                l[i * w + (i - j)] = s / dv[j];
            }
            let mut d = self.get(i, i).re - sigma;
            for k in j0..i {
                d -= l[i * w + (i - k)].norm_sqr() * dv[k];
            }
            if d == 0.0 {
                d = -tiny;
            }
            if d < 0.0 {
                negatives += 1;
            }
            dv[i] = d;
        }
        negatives
    }

    /// All eigenvalues in `[lo, hi)`, ascending, each located to
    /// `rel_tol * max(1, |E|)` by bisection on the inertia count.
    pub fn eigenvalues_in(&self, lo: f64, hi: f64, rel_tol: f64) -> Vec<f64> {
        let mut out = Vec::new();
        let c_lo = self.count_below(lo);
        let c_hi = self.count_below(hi);
        self.refine(lo, hi, c_lo, c_hi, rel_tol, &mut out);
        out
    }

    fn refine(&self, lo: f64, hi: f64, c_lo: usize, c_hi: usize, tol: f64, out: &mut Vec<f64>) {
        if c_hi <= c_lo {
            return;
        }
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol * mid.abs().max(1.0) || mid <= lo || mid >= hi {
            out.extend(std::iter::repeat_n(mid, c_hi - c_lo));
            return;
        }
        let c_mid = self.count_below(mid);
        self.refine(lo, mid, c_lo, c_mid, tol, out);
        self.refine(mid, hi, c_mid, c_hi, tol, out);
    }

    /// Unit eigenvector for the eigenvalue `lambda` by inverse iteration.
    pub fn eigenvector(&self, lambda: f64) -> Vec<Complex64> {
        let lu = BandLu::factor(self, lambda);
        // deterministic, generic start vector
        let mut x: Vec<Complex64> = (0..self.n)
            .map(|i| Complex64::new(1.0 + 0.37 * ((i * 7919) % 101) as f64 / 101.0, 0.0))
            .collect();
        normalize(&mut x);
        for _ in 0..3 {
            x = lu.solve(&x);
            normalize(&mut x);
        }
        x
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

fn normalize(x: &mut [Complex64]) {
    let n = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
}

/// Sparse row with a contiguous column window.
#[derive(Clone)]
struct Row {
    start: usize,
    vals: Vec<Complex64>,
}

impl Row {
    fn at(&self, c: usize) -> Complex64 {
        if c < self.start || c >= self.start + self.vals.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.vals[c - self.start]
        }
    }

    fn end(&self) -> usize {
        self.start + self.vals.len()
    }

    fn sub(&mut self, c: usize, v: Complex64) {
        if c < self.start {
            let pad = self.start - c;
            let mut nv = vec![Complex64::new(0.0, 0.0); pad];
            nv.extend_from_slice(&self.vals);
            self.vals = nv;
            self.start = c;
        }
        if c >= self.end() {
            self.vals.resize(c - self.start + 1, Complex64::new(0.0, 0.0));
        }
        self.vals[c - self.start] -= v;
    }
}

/// LU factorization with partial pivoting of `A - λ I`.
struct BandLu {
    rows: Vec<Row>,
    pivots: Vec<usize>,
    multipliers: Vec<Vec<(usize, Complex64)>>,
}

impl BandLu {
    fn factor(a: &HermitianBand, lambda: f64) -> Self {
        let n = a.n;
        let b = a.bandwidth;
        let mut rows: Vec<Row> = (0..n)
            .map(|i| {
                let start = i.saturating_sub(b);
                let end = (i + b).min(n - 1);
                let vals = (start..=end)
                    .map(|j| {
                        let v = a.get(i, j);
                        if i == j { v - lambda } else { v }
                    })
                    .collect();
                Row { start, vals }
            })
            .collect();
        let mut pivots = Vec::with_capacity(n);
        let mut multipliers = vec![Vec::new(); n];
        let (g_lo, g_hi) = a.gershgorin();
        let scale = g_lo.abs().max(g_hi.abs()).max(1.0);
        for k in 0..n {
            let last = (k + b).min(n - 1);
            let p = (k..=last)
                .max_by(|&x, &y| rows[x].at(k).norm().total_cmp(&rows[y].at(k).norm()))
                .unwrap();
            rows.swap(k, p);
            pivots.push(p);
            let mut pivot = rows[k].at(k);
            if pivot.norm() < f64::EPSILON * scale {
                pivot = Complex64::new(f64::EPSILON * scale, 0.0);
                let cur = rows[k].at(k);
                rows[k].sub(k, cur - pivot);
            }
            let pivot_row = rows[k].clone();
            #[allow(clippy::needless_range_loop)]
            for r in k + 1..=last {
                let m = rows[r].at(k) / pivot;
                if m == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in k..pivot_row.end() {
                    let v = pivot_row.at(c);
                    if v != Complex64::new(0.0, 0.0) {
                        rows[r].sub(c, m * v);
                    }
                }
                multipliers[k].push((r, m));
            }
        }
        BandLu {
            rows,
            pivots,
            multipliers,
        }
    }

    fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = rhs.len();
        let mut y: Vec<Complex64> = rhs.to_vec();
        for k in 0..n {
            y.swap(k, self.pivots[k]);
            for &(r, m) in &self.multipliers[k] {
                let v = y[k];
                y[r] -= m * v;
            }
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for k in (0..n).rev() {
            let row = &self.rows[k];
            let mut s = y[k];
            for (c, xc) in x.iter().enumerate().take(row.end()).skip(k + 1) {
                s -= row.at(c) * xc;
            }
            x[k] = s / row.at(k);
        }
        x
    }
}
