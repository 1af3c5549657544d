//! The recursive lower-bound family `G(B, D, m)`.
//!
//! Edge weights are carried symbolically in `D` as
//! `(a1 + a2 D) + (b1 + b2 D) λ`; the numeric `D` is substituted only when
//! a graph is materialized.

mod builder;
mod profile;
mod verify;

pub use builder::{build_phi_graph, PhiInstance, PhiParams};
pub use profile::{coefficient_profile, max_coefficient_bits, ProfileCache};
pub use verify::{
    count_final_pieces, final_envelope, midpoint_witnesses, perturb_edge, verify_phi, PhiReport,
    PropertyCheck,
};

use std::ops::Add;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::affine::AffineForm;
use crate::error::{Error, Result};
use crate::rational::{int, Rational};

fn big(v: usize) -> BigInt {
    BigInt::from(v)
}

/// Left anchors `α(j, m)` of the level-`m` intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalSpec {
    pub n: usize,
    pub m: usize,
    pub alpha: Vec<BigInt>,
}

impl IntervalSpec {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(
                "interval recursion needs n >= 2".into(),
            ));
        }
        let big_n = big(n * n);
        let mut alpha = vec![BigInt::zero()];
        for _ in 0..m {
            let mut next = Vec::with_capacity(alpha.len() * n);
            for a in &alpha {
                for r in 0..n {
                    next.push(&big_n * a + &big_n * big(r + 1));
                }
            }
            alpha = next;
        }
        Ok(Self { n, m, alpha })
    }

    pub fn count(&self) -> usize {
        self.alpha.len()
    }

    pub fn big_n(&self) -> usize {
        self.n * self.n
    }

    pub fn alpha(&self, j: usize) -> Result<&BigInt> {
        self.alpha
            .get(j)
            .ok_or_else(|| Error::InvalidParameter(format!("interval index {j} out of range")))
    }

    /// `I(j, m) = [α + 1, α + N - 1]`.
    pub fn interval(&self, j: usize) -> Result<(Rational, Rational)> {
        let a = Rational::from_integer(self.alpha(j)?.clone());
        Ok((&a + int(1), a + int(self.big_n() as i64 - 1)))
    }

    pub fn midpoint(&self, j: usize) -> Result<Rational> {
        let (lo, hi) = self.interval(j)?;
        Ok((lo + hi) / int(2))
    }
}

pub fn alpha(j: usize, m: usize, n: usize) -> Result<BigInt> {
    IntervalSpec::new(n, m)?.alpha(j).cloned()
}

pub fn interval(j: usize, m: usize, n: usize) -> Result<(Rational, Rational)> {
    IntervalSpec::new(n, m)?.interval(j)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelConstants {
    pub k_l: Rational,
    pub k_r: Rational,
    pub d_l: Rational,
    pub d_r: Rational,
}

pub(crate) fn k_l(inputs: usize, m: usize, n: usize) -> Rational {
    let big_n = int((n * n) as i64);
    int(400) * big_n.pow((m + 4) as i32) * int((inputs * inputs) as i64)
}

pub(crate) fn k_r(inputs: usize, n: usize) -> Rational {
    let big_n = int((n * n) as i64);
    int(20) * big_n.pow(3) * int(inputs as i64)
}

pub fn level_constants(inputs: usize, d: &Rational, m: usize, n: usize) -> Result<LevelConstants> {
    if d.abs() > int(1) {
        return Err(Error::InvalidParameter("|D| must be at most 1".into()));
    }
    if inputs == 0 || m == 0 {
        return Err(Error::InvalidParameter(
            "level constants need B >= 1 and m >= 1".into(),
        ));
    }
    let big_n = int((n * n) as i64);
    let k_l = k_l(inputs, m, n);
    let k_r = k_r(inputs, n);
    let d_l = &big_n / (int(2) * &k_l) * (d - &k_r / &big_n);
    Ok(LevelConstants {
        k_l,
        k_r,
        d_l,
        d_r: Rational::one(),
    })
}

/// `(a1 + a2 D) + (b1 + b2 D) λ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymWeight {
    pub a1: Rational,
    pub a2: Rational,
    pub b1: Rational,
    pub b2: Rational,
}

impl SymWeight {
    pub fn zero() -> Self {
        Self {
            a1: Rational::zero(),
            a2: Rational::zero(),
            b1: Rational::zero(),
            b2: Rational::zero(),
        }
    }

    pub fn components(&self) -> [&Rational; 4] {
        [&self.a1, &self.a2, &self.b1, &self.b2]
    }

    pub fn eval(&self, d: &Rational) -> AffineForm {
        AffineForm::new(&self.a1 + &self.a2 * d, &self.b1 + &self.b2 * d)
    }

    /// Embedding of a `G(B, D_L, m-1)` edge into `G(B, D, m)`: substitute
    /// `D_L`, scale by `K_L` and stretch λ by `N`.
    pub fn into_left(&self, k_l: &Rational, k_r: &Rational, big_n: &Rational) -> Self {
        let two = int(2);
        Self {
            a1: k_l * &self.a1 - &self.a2 * k_r / &two,
            a2: &self.a2 * big_n / &two,
            b1: k_l * &self.b1 / big_n - &self.b2 * k_r / (&two * big_n),
            b2: &self.b2 / &two,
        }
    }

    /// Embedding of a `G(B + n, 1, m-1)` edge: `D_R = 1` is folded in.
    pub fn into_right(&self, k_r: &Rational, big_n: &Rational) -> Self {
        Self {
            a1: k_r * (&self.a1 + &self.a2),
            a2: Rational::zero(),
            b1: k_r * (&self.b1 + &self.b2) / big_n,
            b2: Rational::zero(),
        }
    }

    /// Fragment of the link edge `(b, b + r)` spanning `dx`.
    pub fn link_fragment(
        b: usize,
        r: usize,
        dx: &Rational,
        k_r: &Rational,
        big_n: &Rational,
    ) -> Self {
        let rq = int(r as i64);
        let tri = int((r * (r + 1) / 2) as i64);
        Self {
            a1: k_r * tri * dx,
            a2: big_n * &rq * int(b as i64) * dx,
            b1: -(k_r * rq / big_n) * dx,
            b2: Rational::zero(),
        }
    }

    pub fn max_numerator(&self) -> BigInt {
        self.components()
            .iter()
            .map(|c| c.numer().abs())
            .max()
            .unwrap()
    }

    pub fn max_denominator(&self) -> BigInt {
        self.components()
            .iter()
            .map(|c| c.denom().clone())
            .max()
            .unwrap()
    }
}

impl Add for &SymWeight {
    type Output = SymWeight;
    fn add(self, o: &SymWeight) -> SymWeight {
        SymWeight {
            a1: &self.a1 + &o.a1,
            a2: &self.a2 + &o.a2,
            b1: &self.b1 + &o.b1,
            b2: &self.b2 + &o.b2,
        }
    }
}

/// `(3^{m+1} - 1)(B + m n)^4`.
pub fn vertex_bound(inputs: usize, m: usize, n: usize) -> BigInt {
    (BigInt::from(3u32).pow((m + 1) as u32) - 1) * big(inputs + m * n).pow(4)
}

/// `(400 N B)^{5 m^2}`.
pub fn numerator_bound(inputs: usize, m: usize, n: usize) -> BigInt {
    big(400 * n * n * inputs).pow((5 * m * m) as u32)
}

/// `2^m n^2`.
pub fn denominator_bound(m: usize, n: usize) -> BigInt {
    BigInt::from(2u32).pow(m as u32) * big(n * n)
}
