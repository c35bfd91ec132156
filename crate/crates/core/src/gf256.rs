//! GF(2^8) with the primitive polynomial x^8 + x^4 + x^3 + x^2 + 1 (0x11D).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub};
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

const POLYNOMIAL: u16 = 0x11D;

struct Tables {
    log: [u8; 256],
    exp: [u8; 512],
}

static TABLES: LazyLock<Tables> = LazyLock::new(|| {
    let mut log = [0u8; 256];
    let mut exp = [0u8; 512];
    let mut x: u16 = 1;
    for i in 0..255 {
        exp[i] = x as u8;
        log[x as usize] = i as u8;
        x <<= 1;
        if x & 0x100 != 0 {
            x ^= POLYNOMIAL;
        }
    }
    for i in 255..512 {
        exp[i] = exp[i - 255];
    }
    Tables { log, exp }
});

/// Element of GF(256).  Serialises as its integer value `0..=255`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Gf256(pub u8);

impl Gf256 {
    pub const ZERO: Gf256 = Gf256(0);
    pub const ONE: Gf256 = Gf256(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self) -> Option<Gf256> {
        if self.0 == 0 {
            return None;
        }
        let t = &*TABLES;
        Some(Gf256(t.exp[255 - t.log[self.0 as usize] as usize]))
    }

    pub fn pow(self, e: u32) -> Gf256 {
        if e == 0 {
            return Gf256::ONE;
        }
        if self.0 == 0 {
            return Gf256::ZERO;
        }
        let t = &*TABLES;
        let l = (t.log[self.0 as usize] as u64 * e as u64) % 255;
        Gf256(t.exp[l as usize])
    }

    /// All 256 elements in numeric order.
    pub fn all() -> impl Iterator<Item = Gf256> {
        (0..=255u8).map(Gf256)
    }

    /// The 255 nonzero elements in numeric order.
    pub fn nonzero() -> impl Iterator<Item = Gf256> {
        (1..=255u8).map(Gf256)
    }
}

impl fmt::Debug for Gf256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Gf256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Gf256 {
    type Output = Gf256;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Gf256) -> Gf256 {
        Gf256(self.0 ^ rhs.0)
    }
}

impl AddAssign for Gf256 {
    fn add_assign(&mut self, rhs: Gf256) {
        *self = *self + rhs;
    }
}

impl Sub for Gf256 {
    type Output = Gf256;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: Gf256) -> Gf256 {
        Gf256(self.0 ^ rhs.0)
    }
}

impl Neg for Gf256 {
    type Output = Gf256;
    fn neg(self) -> Gf256 {
        self
    }
}

impl Mul for Gf256 {
    type Output = Gf256;
    fn mul(self, rhs: Gf256) -> Gf256 {
        if self.0 == 0 || rhs.0 == 0 {
            return Gf256::ZERO;
        }
        let t = &*TABLES;
        Gf256(t.exp[t.log[self.0 as usize] as usize + t.log[rhs.0 as usize] as usize])
    }
}

impl MulAssign for Gf256 {
    fn mul_assign(&mut self, rhs: Gf256) {
        *self = *self * rhs;
    }
}

impl Div for Gf256 {
    type Output = Gf256;
    /// Panics on division by zero.
    fn div(self, rhs: Gf256) -> Gf256 {
        self * rhs.inv().expect("division by zero in GF(256)")
    }
}

impl std::iter::Sum for Gf256 {
    fn sum<I: Iterator<Item = Gf256>>(iter: I) -> Gf256 {
        iter.fold(Gf256::ZERO, |a, b| a + b)
    }
}

/// Dot product of two equal-length slices.
pub fn dot(a: &[Gf256], b: &[Gf256]) -> Gf256 {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// Determinant by Gaussian elimination (characteristic two: no sign).
pub fn determinant(mut m: Vec<Vec<Gf256>>) -> Gf256 {
    let n = m.len();
    let mut det = Gf256::ONE;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Gf256::ZERO;
        };
        m.swap(col, pivot);
        det *= m[col][col];
        let inv = m[col][col].inv().expect("nonzero pivot");
        for r in col + 1..n {
            let factor = m[r][col] * inv;
            if factor.is_zero() {
                continue;
            }
            for c in col..n {
                let v = m[col][c];
                m[r][c] += factor * v;
            }
        }
    }
    det
}

/// Solve `A x = b` for square `A`; `None` when `A` is singular.
pub fn solve(mut a: Vec<Vec<Gf256>>, mut b: Vec<Gf256>) -> Option<Vec<Gf256>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].inv()?;
        for c in col..n {
            a[col][c] *= inv;
        }
        b[col] *= inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col];
            for c in col..n {
                let v = a[col][c];
                a[r][c] += factor * v;
            }
            let v = b[col];
            b[r] += factor * v;
        }
    }
    Some(b)
}

/// Rank of a (possibly rectangular) matrix.
pub fn rank(mut m: Vec<Vec<Gf256>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, pivot);
        let inv = m[rank][col].inv().expect("nonzero pivot");
        for r in 0..rows {
            if r == rank || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col] * inv;
            for c in col..cols {
                let v = m[rank][c];
                m[r][c] += factor * v;
            }
        }
        rank += 1;
    }
    rank
}
