use crate::rational::{self, Rational};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// A finite formal combination of vertices with rational coefficients.
///
/// Zero coefficients are never stored, so two divisors compare equal exactly
/// when they agree at every vertex.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Divisor {
    coefficients: BTreeMap<String, Rational>,
}

impl Divisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        let mut d = Self::zero();
        for (id, c) in pairs {
            d.add_at(id, &c);
        }
        d
    }

    pub fn coefficient(&self, id: &str) -> Rational {
        self.coefficients
            .get(id)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Adds `c` to the coefficient at `id`.
    pub fn add_at(&mut self, id: impl Into<String>, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let id = id.into();
        let entry = self
            .coefficients
            .entry(id.clone())
            .or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coefficients.remove(&id);
        }
    }

    pub fn degree(&self) -> Rational {
        self.coefficients.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Nonzero coefficients in id order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.coefficients.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn support(&self) -> impl Iterator<Item = &str> {
        self.coefficients.keys().map(String::as_str)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::from_pairs(self.iter().map(|(k, v)| (k, v * factor)))
    }

    /// Sum of coefficients over the given vertices.
    pub fn restricted_degree<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> Rational {
        ids.into_iter().map(|id| self.coefficient(id)).sum()
    }
}

impl Add for &Divisor {
    type Output = Divisor;

    fn add(self, rhs: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (k, v) in rhs.iter() {
            out.add_at(k, v);
        }
        out
    }
}

impl Sub for &Divisor {
    type Output = Divisor;

    fn sub(self, rhs: &Divisor) -> Divisor {
        self + &(-rhs)
    }
}

impl Neg for &Divisor {
    type Output = Divisor;

    fn neg(self) -> Divisor {
        Divisor::from_pairs(self.iter().map(|(k, v)| (k, -v)))
    }
}

impl fmt::Display for Divisor {
    /// `3[a] - 1/2[b]`, or `0` for the zero divisor.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (id, c)) in self.iter().enumerate() {
            let text = rational::format(c);
            match (i, text.strip_prefix('-')) {
                (0, _) => write!(f, "{text}[{id}]")?,
                (_, Some(abs)) => write!(f, " - {abs}[{id}]")?,
                (_, None) => write!(f, " + {text}[{id}]")?,
            }
        }
        Ok(())
    }
}
