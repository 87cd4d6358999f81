//! Symmetric banded storage and the two banded factorizations the solver needs:
//! Cholesky for the overlap and pivoted LU for shifted, indefinite pencils.

use std::io::{self, BufRead, Write};

use crate::error::{Error, Result};

/// Symmetric matrix with `bandwidth` sub-diagonals stored by diagonal:
/// `diags[d][i]` holds A[i + d][i].
#[derive(Debug, Clone, PartialEq)]
pub struct SymBandMatrix {
    n: usize,
    bandwidth: usize,
    diags: Vec<Vec<f64>>,
}

impl SymBandMatrix {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        let bandwidth = bandwidth.min(n.saturating_sub(1));
        let diags = (0..=bandwidth).map(|d| vec![0.0; n - d]).collect();
        SymBandMatrix { n, bandwidth, diags }
    }

    /// Copies the band of a dense symmetric matrix (lower triangle is read).
    pub fn from_dense(a: &[Vec<f64>], bandwidth: usize) -> Self {
        let n = a.len();
        let mut m = Self::zeros(n, bandwidth);
        for d in 0..=m.bandwidth {
            for i in 0..n - d {
                m.diags[d][i] = a[i + d][i];
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn diagonal(&self, d: usize) -> &[f64] {
        &self.diags[d]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        if d > self.bandwidth {
            0.0
        } else {
            self.diags[d][lo]
        }
    }

    /// Adds `v` to A[i][j] (and A[j][i]); `i >= j`, within the band.
    #[inline]
    pub fn add_lower(&mut self, i: usize, j: usize, v: f64) {
        self.diags[i - j][j] += v;
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut a = vec![vec![0.0; self.n]; self.n];
        for d in 0..=self.bandwidth {
            for i in 0..self.n - d {
                a[i + d][i] = self.diags[d][i];
                a[i][i + d] = self.diags[d][i];
            }
        }
        a
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y: Vec<f64> = self.diags[0].iter().zip(x).map(|(a, b)| a * b).collect();
        for d in 1..=self.bandwidth {
            for (i, &a) in self.diags[d].iter().enumerate() {
                y[i + d] += a * x[i];
                y[i] += a * x[i + d];
            }
        }
        y
    }

    /// xᵀ A y.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        dot(x, &self.matvec(y))
    }

    /// Infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        let mut rows = vec![0.0f64; self.n];
        for d in 0..=self.bandwidth {
            for (i, &a) in self.diags[d].iter().enumerate() {
                rows[i + d] += a.abs();
                if d > 0 {
                    rows[i] += a.abs();
                }
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.diags.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// self + alpha·other; bandwidths may differ.
    pub fn add_scaled(&self, alpha: f64, other: &SymBandMatrix) -> Result<SymBandMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.n, other.n)));
        }
        let bw = self.bandwidth.max(other.bandwidth);
        let mut out = SymBandMatrix::zeros(self.n, bw);
        for d in 0..=bw {
            for i in 0..self.n - d {
                out.diags[d][i] = self.get(i + d, i) + alpha * other.get(i + d, i);
            }
        }
        Ok(out)
    }

    /// Plain-text dump: a header line, then one line per stored diagonal
    /// (`d` followed by its entries in shortest round-trip decimal form).
    pub fn write_text<W: Write>(&self, name: &str, mut w: W) -> io::Result<()> {
        writeln!(w, "# {name} dimension={} bandwidth={}", self.n, self.bandwidth)?;
        for (d, diag) in self.diags.iter().enumerate() {
            write!(w, "{d}")?;
            for v in diag {
                write!(w, " {v:?}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(r: R) -> Result<(String, SymBandMatrix)> {
        let bad = |m: &str| Error::InvalidInput(format!("banded dump: {m}"));
        let mut lines = r.lines().map(|l| l.map_err(|e| bad(&e.to_string())));
        let header = lines.next().ok_or_else(|| bad("empty input"))??;
        let mut parts = header.trim_start_matches('#').split_whitespace();
        let name = parts.next().ok_or_else(|| bad("missing name"))?.to_string();
        let mut field = |key: &str| -> Result<usize> {
            parts
                .next()
                .and_then(|p| p.strip_prefix(key))
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| bad(&format!("missing {key}")))
        };
        let n = field("dimension=")?;
        let bw = field("bandwidth=")?;
        let mut m = SymBandMatrix::zeros(n, bw);
        for d in 0..=m.bandwidth {
            let line = lines.next().ok_or_else(|| bad("truncated"))??;
            let mut it = line.split_whitespace();
            let idx: usize = it.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad("diagonal index"))?;
            if idx != d {
                return Err(bad("diagonals out of order"));
            }
            let vals: Vec<f64> = it.map(|s| s.parse::<f64>().map_err(|_| bad("number"))).collect::<Result<_>>()?;
            if vals.len() != n - d {
                return Err(bad("diagonal length"));
            }
            m.diags[d] = vals;
        }
        Ok((name, m))
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Banded Cholesky factor A = L·Lᵀ; `l[d][i]` holds L[i + d][i].
#[derive(Debug, Clone)]
pub struct BandCholesky {
    n: usize,
    bandwidth: usize,
    l: Vec<Vec<f64>>,
}

impl BandCholesky {
    pub fn factor(a: &SymBandMatrix) -> Result<Self> {
        let n = a.n;
        let b = a.bandwidth;
        let mut l = a.diags.clone();
        for j in 0..n {
            let mut diag = l[0][j];
            for k in j.saturating_sub(b)..j {
                let v = l[j - k][k];
                diag -= v * v;
            }
            if !(diag > 0.0) {
                return Err(Error::NotPositiveDefinite { pivot: j, value: diag });
            }
            let ljj = diag.sqrt();
            l[0][j] = ljj;
            for i in j + 1..(j + b + 1).min(n) {
                let mut s = l[i - j][j];
                for k in i.saturating_sub(b)..j {
                    s -= l[i - k][k] * l[j - k][k];
                }
                l[i - j][j] = s / ljj;
            }
        }
        Ok(BandCholesky { n, bandwidth: b, l })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves L·y = x in place.
    pub fn solve_lower(&self, x: &mut [f64]) {
        let b = self.bandwidth;
        for i in 0..self.n {
            let mut s = x[i];
            for k in i.saturating_sub(b)..i {
                s -= self.l[i - k][k] * x[k];
            }
            x[i] = s / self.l[0][i];
        }
    }

    /// Solves Lᵀ·y = x in place.
    pub fn solve_upper(&self, x: &mut [f64]) {
        let b = self.bandwidth;
        for i in (0..self.n).rev() {
            let mut s = x[i];
            for k in i + 1..(i + b + 1).min(self.n) {
                s -= self.l[k - i][i] * x[k];
            }
            x[i] = s / self.l[0][i];
        }
    }
}

/// LU factorization with partial pivoting of a banded (generally indefinite)
/// matrix with `kl` sub- and super-diagonals.
#[derive(Debug, Clone)]
pub struct BandLu {
    n: usize,
    /// U rows: `u[i][c]` is U[i][i + c], c in 0..=2·kl.
    u: Vec<Vec<f64>>,
    /// Multipliers: `mult[i][m - 1]` eliminated row i + m at step i.
    mult: Vec<Vec<f64>>,
    piv: Vec<usize>,
}

impl BandLu {
    pub fn factor(a: &SymBandMatrix) -> Result<Self> {
        let n = a.n;
        let kl = a.bandwidth;
        let width = 3 * kl + 1;
        // Working rows: row r stores columns r - kl ..= r + 2kl at offset col + kl - r.
        let mut rows: Vec<Vec<f64>> = (0..n)
            .map(|r| {
                let mut row = vec![0.0; width];
                for c in r.saturating_sub(kl)..(r + kl + 1).min(n) {
                    row[c + kl - r] = a.get(r, c);
                }
                row
            })
            .collect();
        let mut u = Vec::with_capacity(n);
        let mut mult = Vec::with_capacity(n);
        let mut piv = Vec::with_capacity(n);
        let at = |rows: &Vec<Vec<f64>>, r: usize, c: usize| -> f64 {
            if c + kl < r || c > r + 2 * kl {
                0.0
            } else {
                rows[r][c + kl - r]
            }
        };
        for i in 0..n {
            let last = (i + kl).min(n - 1);
            let mut p = i;
            let mut best = at(&rows, i, i).abs();
            for r in i + 1..=last {
                let v = at(&rows, r, i).abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::NoConvergence(format!("singular shifted matrix at pivot {i}")));
            }
            piv.push(p);
            if p != i {
                // Re-index both rows by absolute column while swapping.
                let ri: Vec<f64> = (i..(i + 2 * kl + 1).min(n)).map(|c| at(&rows, i, c)).collect();
                let rp: Vec<f64> = (i..(i + 2 * kl + 1).min(n)).map(|c| at(&rows, p, c)).collect();
                for (off, c) in (i..(i + 2 * kl + 1).min(n)).enumerate() {
                    rows[i][c + kl - i] = rp[off];
                    if c + kl >= p && c <= p + 2 * kl {
                        rows[p][c + kl - p] = ri[off];
                    } else {
                        debug_assert!(ri[off] == 0.0);
                    }
                }
            }
            let cols_end = (i + 2 * kl + 1).min(n);
            let pivot = rows[i][kl];
            let mut ms = Vec::with_capacity(kl);
            for r in i + 1..=last {
                let m = at(&rows, r, i) / pivot;
                ms.push(m);
                if m != 0.0 {
                    for c in i..cols_end {
                        let ui = rows[i][c + kl - i];
                        if c <= r + 2 * kl {
                            rows[r][c + kl - r] -= m * ui;
                        }
                    }
                }
            }
            u.push((i..i + 2 * kl + 1).map(|c| if c < n { rows[i][c + kl - i] } else { 0.0 }).collect());
            mult.push(ms);
        }
        Ok(BandLu { n, u, mult, piv })
    }

    pub fn solve(&self, x: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let p = self.piv[i];
            if p != i {
                x.swap(i, p);
            }
            let xi = x[i];
            for (m_idx, &m) in self.mult[i].iter().enumerate() {
                x[i + 1 + m_idx] -= m * xi;
            }
        }
        for i in (0..n).rev() {
            let row = &self.u[i];
            let mut s = x[i];
            for c in 1..row.len() {
                if i + c < n {
                    s -= row[c] * x[i + c];
                }
            }
            x[i] = s / row[0];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sample(n: usize, bw: usize, shift: f64) -> SymBandMatrix {
        let mut m = SymBandMatrix::zeros(n, bw);
        for i in 0..n {
            for j in i.saturating_sub(bw)..=i {
                let v = if i == j { 4.0 + shift + (i as f64).sin() } else { 1.0 / (1.0 + (i + 2 * j) as f64).sqrt() };
                m.add_lower(i, j, v);
            }
        }
        m
    }

    #[test]
    fn storage_and_matvec() {
        let m = sample(7, 2, 0.0);
        let d = m.to_dense();
        for i in 0..7 {
            for j in 0..7 {
                assert_eq!(d[i][j], d[j][i]);
                assert_eq!(m.get(i, j), d[i][j]);
                if i.abs_diff(j) > 2 {
                    assert_eq!(d[i][j], 0.0);
                }
            }
        }
        let x: Vec<f64> = (0..7).map(|i| i as f64 - 2.5).collect();
        let y = m.matvec(&x);
        for i in 0..7 {
            let e: f64 = (0..7).map(|j| d[i][j] * x[j]).sum();
            assert_relative_eq!(y[i], e, epsilon = 1e-13);
        }
        assert_eq!(SymBandMatrix::from_dense(&d, 2), m);
    }

    #[test]
    fn cholesky_solves() {
        let m = sample(30, 4, 2.0);
        let ch = BandCholesky::factor(&m).unwrap();
        let b: Vec<f64> = (0..30).map(|i| (i as f64).cos()).collect();
        let mut x = b.clone();
        ch.solve_lower(&mut x);
        ch.solve_upper(&mut x);
        let r = m.matvec(&x);
        for (ri, bi) in r.iter().zip(&b) {
            assert_relative_eq!(ri, bi, epsilon = 1e-12);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let m = sample(10, 2, -8.0);
        assert!(matches!(BandCholesky::factor(&m), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn lu_solves_indefinite() {
        for (n, bw) in [(1, 0), (5, 1), (25, 3), (40, 9)] {
            let m = sample(n, bw, -4.3);
            let lu = BandLu::factor(&m).unwrap();
            let b: Vec<f64> = (0..n).map(|i| 1.0 + (i as f64 * 0.7).sin()).collect();
            let mut x = b.clone();
            lu.solve(&mut x);
            let r = m.matvec(&x);
            for (ri, bi) in r.iter().zip(&b) {
                assert_relative_eq!(ri, bi, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn lu_forced_pivoting() {
        // Zero diagonal forces a row swap at every step.
        let mut m = SymBandMatrix::zeros(6, 1);
        for i in 0..5 {
            m.add_lower(i + 1, i, 1.0 + i as f64);
        }
        let lu = BandLu::factor(&m).unwrap();
        let b = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let mut x = b.clone();
        lu.solve(&mut x);
        let r = m.matvec(&x);
        for (ri, bi) in r.iter().zip(&b) {
            assert_relative_eq!(ri, bi, epsilon = 1e-12);
        }
    }

    #[test]
    fn text_dump_round_trip() {
        let m = sample(9, 3, 0.1);
        let mut buf = Vec::new();
        m.write_text("S", &mut buf).unwrap();
        let (name, back) = SymBandMatrix::read_text(buf.as_slice()).unwrap();
        assert_eq!(name, "S");
        assert_eq!(back, m);
    }
}
