//! Lowest eigenvalues of symmetric (block-)tridiagonal matrices by
//! Sturm-count bisection. Deterministic and O(n) per count.

/// A symmetric operator whose inertia can be counted cheaply.
pub trait SturmCount {
    fn dim(&self) -> usize;
    /// Number of eigenvalues strictly below `sigma`.
    fn count_below(&self, sigma: f64) -> usize;
    /// Interval containing the whole spectrum.
    fn spectral_bounds(&self) -> (f64, f64);
}

const TINY: f64 = 1e-300;

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    /// `off[i]` couples rows i and i+1.
    pub off: Vec<f64>,
}

impl SturmCount for SymTridiagonal {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn count_below(&self, sigma: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for (i, &d) in self.diag.iter().enumerate() {
            let e2 = if i == 0 {
                0.0
            } else {
                self.off[i - 1] * self.off[i - 1]
            };
            q = d - sigma - if i == 0 { 0.0 } else { e2 / q };
            if q == 0.0 {
                q = -TINY;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn spectral_bounds(&self) -> (f64, f64) {
        gershgorin(self.diag.len(), |i| {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < self.diag.len() {
                self.off[i].abs()
            } else {
                0.0
            };
            (self.diag[i], left + right)
        })
    }
}

/// Symmetric block-tridiagonal matrix with 2×2 diagonal blocks
/// [[a_i, c_i], [c_i, b_i]] and scalar multiples of the identity, e_i·I,
/// on the off-diagonal blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTridiagonal2 {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub e: Vec<f64>,
}

impl BlockTridiagonal2 {
    fn blocks(&self) -> usize {
        self.a.len()
    }
}

impl SturmCount for BlockTridiagonal2 {
    fn dim(&self) -> usize {
        2 * self.blocks()
    }

    /// Block LDLᵀ: D_i = A_i − σI − e²_{i−1}·D_{i−1}⁻¹; counts negative
    /// eigenvalues of every D_i (Sylvester's law of inertia).
    fn count_below(&self, sigma: f64) -> usize {
        let mut count = 0;
        // inverse of the previous pivot block, [[ip, iq], [iq, is]]
        let (mut ip, mut iq, mut is) = (0.0, 0.0, 0.0);
        for i in 0..self.blocks() {
            let e2 = if i == 0 {
                0.0
            } else {
                self.e[i - 1] * self.e[i - 1]
            };
            let p = self.a[i] - sigma - e2 * ip;
            let q = self.c[i] - e2 * iq;
            let s = self.b[i] - sigma - e2 * is;
            let mut det = p * s - q * q;
            if det == 0.0 {
                det = -TINY;
            }
            count += if det < 0.0 {
                1
            } else if p + s < 0.0 {
                2
            } else {
                0
            };
            ip = s / det;
            iq = -q / det;
            is = p / det;
        }
        count
    }

    fn spectral_bounds(&self) -> (f64, f64) {
        let n = self.blocks();
        gershgorin(2 * n, |row| {
            let i = row / 2;
            let (d, c) = if row % 2 == 0 {
                (self.a[i], self.c[i])
            } else {
                (self.b[i], self.c[i])
            };
            let left = if i > 0 { self.e[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.e[i].abs() } else { 0.0 };
            (d, c.abs() + left + right)
        })
    }
}

fn gershgorin(rows: usize, row: impl Fn(usize) -> (f64, f64)) -> (f64, f64) {
    (0..rows).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), i| {
        let (d, r) = row(i);
        (lo.min(d - r), hi.max(d + r))
    })
}

/// The `count` lowest eigenvalues, ascending, each bisected to an absolute
/// width of 1e-13·max(1, |λ|).
pub fn lowest_eigenvalues<T: SturmCount + ?Sized>(op: &T, count: usize) -> Vec<f64> {
    let count = count.min(op.dim());
    let (lo0, hi0) = op.spectral_bounds();
    let pad = 1e-12 * (1.0 + lo0.abs().max(hi0.abs()));
    let (lo0, hi0) = (lo0 - pad, hi0 + pad);
    let mut out: Vec<f64> = Vec::with_capacity(count);
    for k in 0..count {
        // eigenvalues are ascending, so the previous one is a lower bound
        let mut lo = out.last().map_or(lo0, |&prev| prev - pad).max(lo0);
        let mut hi = hi0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 1e-13 * mid.abs().max(1.0) {
                break;
            }
            if op.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    out
}
