//! Region counts from point counts over prime fields.
//!
//! `χ(q)` is the number of points of `(Z/q)^n` off every hyperplane, for all
//! large enough primes `q`. Interpolating through `n + 1` primes recovers `χ`,
//! and the region count is `(-1)^n χ(-1)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arrangement::ArrangementSpec;
use crate::error::{Error, Result};

/// Integer polynomial, coefficients listed from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPolynomial {
    coefficients: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coefficients: Vec<BigInt>) -> Self {
        while coefficients.len() > 1 && coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            coefficients.push(BigInt::zero());
        }
        Self { coefficients }
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn is_monic(&self) -> bool {
        self.coefficients.last().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coefficients
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() && !(first && d == 0) {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (d, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{a}q")?,
                (_, true) => write!(f, "q^{d}")?,
                (_, false) => write!(f, "{a}q^{d}")?,
            }
        }
        Ok(())
    }
}

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    (2..)
        .take_while(|d| d * d <= q)
        .all(|d| !q.is_multiple_of(d))
}

/// `max(n(2m + 2), 2n + 1)`; sample primes must exceed it.
pub fn default_prime_bound(spec: &ArrangementSpec) -> u64 {
    let (n, m) = (spec.n() as u64, spec.max_offset() as u64);
    (n * (2 * m + 2)).max(2 * n + 1)
}

/// The first `count` primes above `bound`.
pub fn primes_above(bound: u64, count: usize) -> Vec<u64> {
    ((bound + 1)..)
        .filter(|&q| is_prime(q))
        .take(count)
        .collect()
}

struct Search {
    n: usize,
    q: usize,
    words: usize,
    /// `forward[i][j]`: offsets `s ∈ S_{i,j}` reduced mod q, for `i < j` (0-based).
    forward: Vec<Vec<Vec<usize>>>,
}

impl Search {
    fn new(spec: &ArrangementSpec, q: u64) -> Self {
        let n = spec.n();
        let q = q as usize;
        let mut forward = vec![vec![Vec::new(); n]; n];
        for ((i, j), set) in spec.hyperplanes() {
            forward[i - 1][j - 1] = set
                .iter()
                .map(|&s| s.rem_euclid(q as i64) as usize)
                .collect();
        }
        Self {
            n,
            q,
            words: q.div_ceil(64),
            forward,
        }
    }

    /// Marks `x_j = v - s` forbidden for every later `j`.
    fn assign(&self, masks: &mut [u64], i: usize, v: usize) {
        for j in i + 1..self.n {
            let row = &mut masks[j * self.words..(j + 1) * self.words];
            for &s in &self.forward[i][j] {
                let bad = (v + self.q - s) % self.q;
                row[bad / 64] |= 1 << (bad % 64);
            }
        }
    }

    fn row<'a>(&self, masks: &'a [u64], j: usize) -> &'a [u64] {
        &masks[j * self.words..(j + 1) * self.words]
    }

    fn is_free(&self, masks: &[u64], j: usize, v: usize) -> bool {
        self.row(masks, j)[v / 64] >> (v % 64) & 1 == 0
    }

    fn free_count(&self, masks: &[u64], j: usize) -> u64 {
        let forbidden: u32 = self.row(masks, j).iter().map(|w| w.count_ones()).sum();
        (self.q as u64) - u64::from(forbidden)
    }

    /// Free values of coordinate `j`, ascending.
    fn free(&self, masks: &[u64], j: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in self.row(masks, j).iter().enumerate() {
            let mut open = !word;
            while open != 0 {
                let v = w * 64 + open.trailing_zeros() as usize;
                if v >= self.q {
                    break;
                }
                out.push(v);
                open &= open - 1;
            }
        }
        out
    }

    /// Completions of the last two coordinates: for each free `x_{n-1} = v`, the
    /// last coordinate loses the values `v - s` that are still free.
    fn count_last_two(&self, masks: &[u64]) -> u64 {
        let (a, b) = (self.n - 2, self.n - 1);
        let base = self.free_count(masks, b);
        let offsets = &self.forward[a][b];
        let mut total = 0;
        for v in self.free(masks, a) {
            let lost = offsets
                .iter()
                .filter(|&&s| self.is_free(masks, b, (v + self.q - s) % self.q))
                .count() as u64;
            total += base - lost;
        }
        total
    }

    fn count_from(&self, masks: &[u64], j: usize, scratch: &mut Vec<Vec<u64>>) -> u64 {
        if j + 1 == self.n {
            return self.free_count(masks, j);
        }
        if j + 2 == self.n {
            return self.count_last_two(masks);
        }
        let mut total = 0;
        let mut child = std::mem::take(&mut scratch[j]);
        for v in self.free(masks, j) {
            child.clear();
            child.extend_from_slice(masks);
            self.assign(&mut child, j, v);
            total += self.count_from(&child, j + 1, scratch);
        }
        scratch[j] = child;
        total
    }

    /// Points with `x_1 = 0`.
    fn count(&self) -> u64 {
        if self.n == 1 {
            return 1;
        }
        let mut root = vec![0u64; self.n * self.words];
        self.assign(&mut root, 0, 0);
        if self.n <= 3 {
            return self.count_from(&root, 1, &mut vec![Vec::new(); self.n]);
        }
        self.free(&root, 1)
            .into_par_iter()
            .map(|v| {
                let mut masks = root.clone();
                self.assign(&mut masks, 1, v);
                let mut scratch = vec![Vec::new(); self.n];
                self.count_from(&masks, 2, &mut scratch)
            })
            .sum()
    }
}

/// `|{x ∈ (Z/q)^n : x_i - x_j ≢ s for every hyperplane}|`.
pub fn complement_count_mod_q(spec: &ArrangementSpec, q: u64) -> Result<u128> {
    let min = 2 * spec.max_offset() as u64 + 2;
    if q <= min || q.is_multiple_of(2) || !is_prime(q) {
        return Err(Error::BadPrime(q, min));
    }
    Ok(u128::from(q) * u128::from(Search::new(spec, q).count()))
}

/// Exact Lagrange interpolation through the given points.
pub fn interpolate(points: &[(u64, u128)]) -> Result<IntPolynomial> {
    let mut acc = vec![BigRational::zero(); points.len()];
    for (i, &(xi, yi)) in points.iter().enumerate() {
        // Numerator polynomial ∏_{j≠i} (x - x_j), built from the constant term up.
        let mut basis = vec![BigInt::one()];
        let mut denom = BigInt::one();
        for (j, &(xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let xj = BigInt::from(xj);
            let mut next = vec![BigInt::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * &xj;
            }
            basis = next;
            denom *= BigInt::from(xi) - xj;
        }
        let scale = BigRational::new(BigInt::from(yi), denom);
        for (d, c) in basis.into_iter().enumerate() {
            acc[d] += &scale * BigRational::from_integer(c);
        }
    }
    let coefficients = acc
        .into_iter()
        .map(|c| c.is_integer().then(|| c.to_integer()))
        .collect::<Option<Vec<_>>>()
        .ok_or(Error::NonIntegralPolynomial)?;
    Ok(IntPolynomial::new(coefficients))
}

fn polynomial_from(spec: &ArrangementSpec, primes: &[u64]) -> Result<IntPolynomial> {
    let points = primes
        .par_iter()
        .map(|&q| complement_count_mod_q(spec, q).map(|c| (q, c)))
        .collect::<Result<Vec<_>>>()?;
    let poly = interpolate(&points)?;
    if poly.degree() != spec.n() || !poly.is_monic() {
        return Err(Error::Inconsistent(format!(
            "interpolated {poly} is not monic of degree {}",
            spec.n()
        )));
    }
    Ok(poly)
}

/// Interpolates `χ` from primes above `bound` and checks it on a second, disjoint prime set.
/// On a mismatch the bound is doubled once.
pub fn characteristic_polynomial_with_bound(
    spec: &ArrangementSpec,
    bound: u64,
) -> Result<IntPolynomial> {
    let k = spec.n() + 1;
    let mut bound = bound.max(default_prime_bound(spec));
    for attempt in 0..2 {
        let primes = primes_above(bound, 2 * k);
        let first = polynomial_from(spec, &primes[..k]);
        let second = polynomial_from(spec, &primes[k..]);
        match (first, second) {
            (Ok(a), Ok(b)) if a == b => return Ok(a),
            _ if attempt == 0 => bound *= 2,
            _ => break,
        }
    }
    Err(Error::UnstablePolynomial(bound))
}

pub fn characteristic_polynomial(spec: &ArrangementSpec) -> Result<IntPolynomial> {
    characteristic_polynomial_with_bound(spec, default_prime_bound(spec))
}

/// `(-1)^n χ(-1)`.
pub fn region_count_zaslavsky_with_bound(spec: &ArrangementSpec, bound: u64) -> Result<BigInt> {
    let chi = characteristic_polynomial_with_bound(spec, bound)?;
    let value = chi.eval(&BigInt::from(-1));
    let count = if spec.n().is_multiple_of(2) {
        value
    } else {
        -value
    };
    if !count.is_positive() {
        return Err(Error::Inconsistent(format!("{chi} gives {count} regions")));
    }
    Ok(count)
}

pub fn region_count_zaslavsky(spec: &ArrangementSpec) -> Result<BigInt> {
    region_count_zaslavsky_with_bound(spec, default_prime_bound(spec))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Walks every point of `(Z/q)^n` and tests each hyperplane directly.
    fn naive_count(spec: &ArrangementSpec, q: u64) -> u128 {
        let n = spec.n();
        let q = q as i64;
        let mut x = vec![0i64; n];
        let mut total = 0;
        loop {
            let off = spec.hyperplanes().all(|((i, j), set)| {
                set.iter()
                    .all(|&s| (x[i - 1] - x[j - 1] - s).rem_euclid(q) != 0)
            });
            total += u128::from(off);
            let Some(pos) = x.iter().position(|&v| v + 1 < q) else {
                return total;
            };
            x[pos] += 1;
            x[..pos].iter_mut().for_each(|v| *v = 0);
        }
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn point_counts() {
        assert_eq!(
            complement_count_mod_q(&ArrangementSpec::braid(2).unwrap(), 5).unwrap(),
            20
        );
        assert_eq!(
            complement_count_mod_q(&ArrangementSpec::empty(3).unwrap(), 5).unwrap(),
            125
        );
        let ish3 = ArrangementSpec::ish(3).unwrap();
        assert_eq!(
            complement_count_mod_q(&ish3, 7).unwrap(),
            naive_count(&ish3, 7)
        );
        let shi4 = ArrangementSpec::shi(4).unwrap();
        assert_eq!(
            complement_count_mod_q(&shi4, 11).unwrap(),
            naive_count(&shi4, 11)
        );
    }

    #[test]
    fn bad_primes() {
        let ish3 = ArrangementSpec::ish(3).unwrap();
        assert!(matches!(
            complement_count_mod_q(&ish3, 5),
            Err(Error::BadPrime(5, 6))
        ));
        assert!(matches!(
            complement_count_mod_q(&ish3, 9),
            Err(Error::BadPrime(9, 6))
        ));
    }

    #[test]
    fn polynomials() {
        let braid = characteristic_polynomial(&ArrangementSpec::braid(3).unwrap()).unwrap();
        assert_eq!(braid.coefficients(), ints(&[0, 2, -3, 1]).as_slice());
        assert_eq!(braid.to_string(), "q^3 - 3q^2 + 2q");
        let empty = characteristic_polynomial(&ArrangementSpec::empty(2).unwrap()).unwrap();
        assert_eq!(empty.coefficients(), ints(&[0, 0, 1]).as_slice());
        // Ish n = 3 is q(q - 3)^2.
        let ish = characteristic_polynomial(&ArrangementSpec::ish(3).unwrap()).unwrap();
        assert_eq!(ish.coefficients(), ints(&[0, 9, -6, 1]).as_slice());
    }

    #[test]
    fn region_counts() {
        let count = |s: ArrangementSpec| region_count_zaslavsky(&s).unwrap();
        assert_eq!(count(ArrangementSpec::braid(3).unwrap()), 6.into());
        assert_eq!(count(ArrangementSpec::ish(3).unwrap()), 16.into());
        assert_eq!(count(ArrangementSpec::shi(3).unwrap()), 16.into());
        assert_eq!(count(ArrangementSpec::empty(1).unwrap()), 1.into());
        assert_eq!(count(ArrangementSpec::ish(4).unwrap()), 125.into());
    }

    #[test]
    fn interpolation_rejects_fractions() {
        assert!(matches!(
            interpolate(&[(0, 0), (1, 1), (2, 3)]),
            Err(Error::NonIntegralPolynomial)
        ));
    }
}
