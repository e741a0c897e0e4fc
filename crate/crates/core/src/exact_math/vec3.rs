use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::scalar::{format_rational, ExactScalar};

/// A point or direction in 3-space with exact rational coordinates.
///
/// The derived ordering is lexicographic in `(x, y, z)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vec3 {
    pub x: ExactScalar,
    pub y: ExactScalar,
    pub z: ExactScalar,
}

impl Vec3 {
    pub fn new(x: ExactScalar, y: ExactScalar, z: ExactScalar) -> Self {
        Self { x, y, z }
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        Self::new(x.into_rational(), y.into_rational(), z.into_rational())
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn coords(&self) -> [&ExactScalar; 3] {
        [&self.x, &self.y, &self.z]
    }

    pub fn dot(&self, other: &Vec3) -> ExactScalar {
        &self.x * &other.x + &self.y * &other.y + &self.z * &other.z
    }

    pub fn cross(&self, other: &Vec3) -> Vec3 {
        Vec3::new(
            &self.y * &other.z - &self.z * &other.y,
            &self.z * &other.x - &self.x * &other.z,
            &self.x * &other.y - &self.y * &other.x,
        )
    }

    pub fn scale(&self, factor: &ExactScalar) -> Vec3 {
        Vec3::new(&self.x * factor, &self.y * factor, &self.z * factor)
    }

    pub fn norm_squared(&self) -> ExactScalar {
        self.dot(self)
    }

    /// `|x| + |y| + |z|`, an upper bound on the Euclidean norm.
    pub fn l1_norm(&self) -> ExactScalar {
        self.x.abs() + self.y.abs() + self.z.abs()
    }

    /// `(1 - t) * self + t * other`.
    pub fn lerp(&self, other: &Vec3, t: &ExactScalar) -> Vec3 {
        self + &(other - self).scale(t)
    }

    /// The positive multiple of `self` with coprime integer coordinates.
    /// Returns the zero vector unchanged.
    pub fn primitive_direction(&self) -> Vec3 {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self
            .coords()
            .iter()
            .fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coords()
            .iter()
            .map(|c| (*c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let gcd = ints
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let reduce = |c: &BigInt| BigRational::from_integer(c / &gcd);
        Vec3::new(reduce(&ints[0]), reduce(&ints[1]), reduce(&ints[2]))
    }
}

trait IntoRational {
    fn into_rational(self) -> ExactScalar;
}

impl IntoRational for i64 {
    fn into_rational(self) -> ExactScalar {
        BigRational::from_integer(BigInt::from(self))
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            format_rational(&self.x),
            format_rational(&self.y),
            format_rational(&self.z)
        )
    }
}

impl Add for &Vec3 {
    type Output = Vec3;
    fn add(self, rhs: &Vec3) -> Vec3 {
        Vec3::new(&self.x + &rhs.x, &self.y + &rhs.y, &self.z + &rhs.z)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        &self + &rhs
    }
}

impl Sub for &Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: &Vec3) -> Vec3 {
        Vec3::new(&self.x - &rhs.x, &self.y - &rhs.y, &self.z - &rhs.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        &self - &rhs
    }
}

impl Neg for &Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-&self.x, -&self.y, -&self.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        -&self
    }
}

impl Mul<&ExactScalar> for &Vec3 {
    type Output = Vec3;
    fn mul(self, rhs: &ExactScalar) -> Vec3 {
        self.scale(rhs)
    }
}
