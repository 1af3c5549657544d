use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::rational::{self, Rational};

/// `constant + slope * lambda`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineForm {
    pub constant: Rational,
    pub slope: Rational,
}

impl AffineForm {
    pub fn new(constant: Rational, slope: Rational) -> Self {
        Self { constant, slope }
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(c, Rational::zero())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        &self.constant + &self.slope * x
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(&self.constant * k, &self.slope * k)
    }

    /// `w(lambda / stretch)`: slope divided by `stretch`.
    pub fn stretch(&self, stretch: &Rational) -> Self {
        Self::new(self.constant.clone(), &self.slope / stretch)
    }

    /// Abscissa where `self` and `other` agree, if their slopes differ.
    pub fn crossing(&self, other: &AffineForm) -> Option<Rational> {
        let ds = &self.slope - &other.slope;
        if ds.is_zero() {
            None
        } else {
            Some((&other.constant - &self.constant) / ds)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.slope.is_zero()
    }
}

impl Add for &AffineForm {
    type Output = AffineForm;
    fn add(self, o: &AffineForm) -> AffineForm {
        AffineForm::new(&self.constant + &o.constant, &self.slope + &o.slope)
    }
}

impl Add for AffineForm {
    type Output = AffineForm;
    fn add(self, o: AffineForm) -> AffineForm {
        &self + &o
    }
}

impl Sub for &AffineForm {
    type Output = AffineForm;
    fn sub(self, o: &AffineForm) -> AffineForm {
        AffineForm::new(&self.constant - &o.constant, &self.slope - &o.slope)
    }
}

impl Neg for &AffineForm {
    type Output = AffineForm;
    fn neg(self) -> AffineForm {
        AffineForm::new(-&self.constant, -&self.slope)
    }
}

impl std::iter::Sum for AffineForm {
    fn sum<I: Iterator<Item = AffineForm>>(iter: I) -> Self {
        iter.fold(AffineForm::zero(), |acc, f| acc + f)
    }
}

impl<'a> std::iter::Sum<&'a AffineForm> for AffineForm {
    fn sum<I: Iterator<Item = &'a AffineForm>>(iter: I) -> Self {
        iter.fold(AffineForm::zero(), |acc, f| &acc + f)
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}*lambda",
            rational::format(&self.constant),
            rational::format(&self.slope)
        )
    }
}
