//! Monomial complete intersections `k[x_1..x_n]/(x_1^{d_1},...,x_n^{d_n})`
//! over a prime field: normalized parameter tuples, Hilbert functions, and
//! graded monomial bases.
//!
//! Bases are enumerated in graded reverse lexicographic order with
//! `x_1 > x_2 > ... > x_n`; equivalently, exponent tuples of equal degree are
//! ordered by ascending lexicographic comparison of their reversals. Ranking
//! within a degree is done by counting bounded compositions, so a basis never
//! has to be materialized to locate one element.

use crate::arith::is_prime;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("no variables remain after dropping degree-1 generators")]
    EmptyAlgebra,
    #[error("generator degrees must be positive")]
    ZeroDegree,
    #[error("dimension count exceeds the native word size")]
    HilbertOverflow,
    #[error("degree {degree} exceeds the socle degree {socle}")]
    DegreeOutOfRange { degree: u64, socle: u64 },
    #[error("exponent tuple is not a basis element of the requested degree")]
    NotABasisElement,
}

/// Exponent tuple of a monomial, one entry per variable.
pub type Exponents = Vec<u64>;

/// A monomial complete intersection, normalized: degrees sorted descending,
/// every degree at least 2 (degree-1 generators only remove variables and
/// are dropped on construction), characteristic prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialCi {
    degrees: Vec<u64>,
    p: u64,
}

impl MonomialCi {
    pub fn new(degrees: &[u64], p: u64) -> Result<Self, AlgebraError> {
        if !is_prime(p) {
            return Err(AlgebraError::NonPrimeCharacteristic(p));
        }
        if degrees.iter().any(|&d| d == 0) {
            return Err(AlgebraError::ZeroDegree);
        }
        let mut kept: Vec<u64> = degrees.iter().copied().filter(|&d| d >= 2).collect();
        if kept.is_empty() {
            return Err(AlgebraError::EmptyAlgebra);
        }
        kept.sort_unstable_by(|a, b| b.cmp(a));
        Ok(MonomialCi { degrees: kept, p })
    }

    /// Generator degrees, sorted descending.
    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn num_vars(&self) -> usize {
        self.degrees.len()
    }

    /// Top nonzero degree of the algebra: the sum of `d_i - 1`.
    pub fn socle_degree(&self) -> u64 {
        self.degrees.iter().map(|&d| d - 1).sum()
    }

    /// The common degree, if all generators share one.
    pub fn uniform_degree(&self) -> Option<u64> {
        let d = self.degrees[0];
        self.degrees.iter().all(|&e| e == d).then_some(d)
    }

    /// The algebra with the generator at `index` removed, or `None` when only
    /// one variable is left.
    pub fn removing(&self, index: usize) -> Option<MonomialCi> {
        if self.degrees.len() <= 1 {
            return None;
        }
        let mut degrees = self.degrees.clone();
        degrees.remove(index);
        Some(MonomialCi { degrees, p: self.p })
    }

    /// Dimensions of the graded pieces, degree 0 through the socle degree.
    pub fn hilbert_function(&self) -> Result<HilbertFunction, AlgebraError> {
        let total_len = (self.socle_degree() + 1) as usize;
        let mut values = Vec::with_capacity(total_len);
        values.push(1u64);
        for &d in &self.degrees {
            let prev_len = values.len();
            let next_len = prev_len + (d - 1) as usize;
            let mut next = Vec::with_capacity(next_len);
            let mut window = 0u64;
            for j in 0..next_len {
                if j < prev_len {
                    window = window
                        .checked_add(values[j])
                        .ok_or(AlgebraError::HilbertOverflow)?;
                }
                if j >= d as usize {
                    window -= values[j - d as usize];
                }
                next.push(window);
            }
            values = next;
        }
        debug_assert_eq!(values.len(), total_len);
        debug_assert!(hilbert_invariants_hold(&values, &self.degrees));
        Ok(HilbertFunction { values })
    }

    /// Calls `f` with every degree-`degree` basis exponent tuple, in order.
    /// The slice passed to `f` is a reused buffer.
    pub fn for_each_basis_element<F: FnMut(&[u64])>(
        &self,
        degree: u64,
        mut f: F,
    ) -> Result<(), AlgebraError> {
        self.check_degree(degree)?;
        let mut buf = vec![0u64; self.degrees.len()];
        walk_basis(&self.degrees, &mut buf, self.degrees.len(), degree, &mut f);
        Ok(())
    }

    /// The monomial basis of the degree-`degree` graded piece.
    pub fn monomial_basis(&self, degree: u64) -> Result<Vec<Exponents>, AlgebraError> {
        let mut basis = Vec::new();
        self.for_each_basis_element(degree, |alpha| basis.push(alpha.to_vec()))?;
        Ok(basis)
    }

    /// Position of `alpha` in the degree-`degree` basis enumeration.
    pub fn basis_index(&self, degree: u64, alpha: &[u64]) -> Result<u64, AlgebraError> {
        let ranker = BasisRanker::new(self, degree)?;
        ranker.index_of(alpha).ok_or(AlgebraError::NotABasisElement)
    }

    /// The socle monomial `(d_1 - 1, ..., d_n - 1)`.
    pub fn socle_exponents(&self) -> Exponents {
        self.degrees.iter().map(|&d| d - 1).collect()
    }

    fn check_degree(&self, degree: u64) -> Result<(), AlgebraError> {
        let socle = self.socle_degree();
        if degree > socle {
            return Err(AlgebraError::DegreeOutOfRange { degree, socle });
        }
        Ok(())
    }
}

/// Recursive product enumeration assigning variables n, n-1, ..., 2 in
/// ascending value order and forcing variable 1 to the remainder; this is
/// exactly ascending lexicographic order on reversed exponent tuples.
fn walk_basis<F: FnMut(&[u64])>(
    degrees: &[u64],
    buf: &mut [u64],
    var: usize,
    remaining: u64,
    f: &mut F,
) {
    if var == 1 {
        if remaining < degrees[0] {
            buf[0] = remaining;
            f(buf);
        }
        return;
    }
    let max_w = remaining.min(degrees[var - 1] - 1);
    for w in 0..=max_w {
        buf[var - 1] = w;
        walk_basis(degrees, buf, var - 1, remaining - w, f);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertFunction {
    values: Vec<u64>,
}

impl HilbertFunction {
    pub fn socle_degree(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    /// `H(degree)`; zero outside `0..=socle_degree`.
    pub fn value(&self, degree: u64) -> u64 {
        usize::try_from(degree)
            .ok()
            .and_then(|i| self.values.get(i).copied())
            .unwrap_or(0)
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

#[cfg(debug_assertions)]
fn hilbert_invariants_hold(values: &[u64], degrees: &[u64]) -> bool {
    use num_bigint::BigUint;
    let total: BigUint = values.iter().map(|&v| BigUint::from(v)).sum();
    let product: BigUint = degrees.iter().map(|&d| BigUint::from(d)).product();
    let symmetric = (0..values.len()).all(|i| values[i] == values[values.len() - 1 - i]);
    total == product && symmetric && values[0] == 1
}

#[cfg(not(debug_assertions))]
fn hilbert_invariants_hold(_values: &[u64], _degrees: &[u64]) -> bool {
    true
}

/// Counting tables for locating basis elements of one fixed degree without
/// enumerating the basis.
pub struct BasisRanker<'c> {
    ci: &'c MonomialCi,
    degree: u64,
    /// `counts[k][s]`: bounded exponent tuples on the first `k` variables
    /// with sum `s`.
    counts: Vec<Vec<u64>>,
}

impl<'c> BasisRanker<'c> {
    pub fn new(ci: &'c MonomialCi, degree: u64) -> Result<Self, AlgebraError> {
        ci.check_degree(degree)?;
        let span = (degree + 1) as usize;
        let mut counts = Vec::with_capacity(ci.num_vars() + 1);
        let mut row = vec![0u64; span];
        row[0] = 1;
        counts.push(row);
        for (k, &d) in ci.degrees().iter().enumerate() {
            let prev = &counts[k];
            let mut row = vec![0u64; span];
            let mut window = 0u64;
            for s in 0..span {
                window = window
                    .checked_add(prev[s])
                    .ok_or(AlgebraError::HilbertOverflow)?;
                if s >= d as usize {
                    window -= prev[s - d as usize];
                }
                row[s] = window;
            }
            counts.push(row);
        }
        Ok(BasisRanker { ci, degree, counts })
    }

    /// Dimension of the graded piece this ranker addresses.
    pub fn dimension(&self) -> u64 {
        self.counts[self.ci.num_vars()][self.degree as usize]
    }

    /// Position of `alpha` in the enumeration, or `None` if it is not a
    /// basis element of this degree.
    pub fn index_of(&self, alpha: &[u64]) -> Option<u64> {
        let degrees = self.ci.degrees();
        if alpha.len() != degrees.len() {
            return None;
        }
        let mut total = 0u64;
        for (a, &d) in alpha.iter().zip(degrees) {
            if *a >= d {
                return None;
            }
            total = total.checked_add(*a)?;
        }
        if total != self.degree {
            return None;
        }
        // Count tuples that come earlier: fix a suffix of alpha, choose a
        // smaller value at one variable, and count free completions.
        let mut rank = 0u64;
        let mut suffix = 0u64;
        for v in (1..=degrees.len()).rev() {
            let a_v = alpha[v - 1];
            for w in 0..a_v {
                let rem = (self.degree - suffix - w) as usize;
                rank = rank.checked_add(self.counts[v - 1][rem])?;
            }
            suffix += a_v;
        }
        Some(rank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ci(degrees: &[u64], p: u64) -> MonomialCi {
        MonomialCi::new(degrees, p).unwrap()
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(ci(&[3, 9, 12], 5).degrees(), &[12, 9, 3]);
        assert_eq!(ci(&[2, 1, 2], 7).degrees(), &[2, 2]);
        assert_eq!(
            MonomialCi::new(&[2, 2], 4),
            Err(AlgebraError::NonPrimeCharacteristic(4))
        );
        assert_eq!(MonomialCi::new(&[1, 1], 5), Err(AlgebraError::EmptyAlgebra));
        assert_eq!(MonomialCi::new(&[], 5), Err(AlgebraError::EmptyAlgebra));
        assert_eq!(MonomialCi::new(&[0, 2], 5), Err(AlgebraError::ZeroDegree));
    }

    #[test]
    fn socle_degree_examples() {
        assert_eq!(ci(&[12, 9, 3], 5).socle_degree(), 21);
        assert_eq!(ci(&[2, 2, 2], 7).socle_degree(), 3);
        assert_eq!(ci(&[3, 3, 4, 5, 5], 11).socle_degree(), 15);
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(ci(&[2, 2, 2], 5).hilbert_function().unwrap().values(), &[1, 3, 3, 1]);
        assert_eq!(ci(&[3, 3], 5).hilbert_function().unwrap().values(), &[1, 2, 3, 2, 1]);
        let squares = ci(&[2, 2, 2, 2, 2, 2], 2).hilbert_function().unwrap();
        assert_eq!(squares.value(2), 15);
        assert_eq!(squares.value(4), 15);
    }

    #[test]
    fn hilbert_is_symmetric_and_monotone_to_middle() {
        for (degrees, p) in [
            (vec![12u64, 9, 3], 5u64),
            (vec![5, 4, 3, 2], 3),
            (vec![7, 7, 7], 7),
            (vec![2, 2], 2),
            (vec![25, 10, 2, 2, 2], 13),
        ] {
            let a = ci(&degrees, p);
            let h = a.hilbert_function().unwrap();
            let t = h.socle_degree();
            for i in 0..=t {
                assert_eq!(h.value(i), h.value(t - i), "{degrees:?} at {i}");
            }
            for i in 1..=t / 2 {
                assert!(h.value(i) >= h.value(i - 1), "{degrees:?} at {i}");
            }
        }
    }

    #[test]
    fn basis_examples() {
        let a = ci(&[2, 2, 2], 5);
        assert_eq!(
            a.monomial_basis(1).unwrap(),
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]
        );
        assert_eq!(a.monomial_basis(3).unwrap(), vec![vec![1, 1, 1]]);
        let b = ci(&[12, 9, 3], 5);
        assert_eq!(b.monomial_basis(21).unwrap(), vec![vec![11, 8, 2]]);
        assert_eq!(
            b.monomial_basis(22),
            Err(AlgebraError::DegreeOutOfRange { degree: 22, socle: 21 })
        );
    }

    #[test]
    fn basis_matches_hilbert_dimension() {
        for (degrees, p) in [(vec![4u64, 3, 2], 3u64), (vec![5, 5, 5], 5), (vec![3, 2, 2, 2], 2)] {
            let a = ci(&degrees, p);
            let h = a.hilbert_function().unwrap();
            for i in 0..=a.socle_degree() {
                assert_eq!(a.monomial_basis(i).unwrap().len() as u64, h.value(i));
            }
        }
    }

    #[test]
    fn basis_enumeration_is_reverse_lexicographic() {
        let a = ci(&[4, 3, 3], 7);
        for i in 0..=a.socle_degree() {
            let basis = a.monomial_basis(i).unwrap();
            for pair in basis.windows(2) {
                let rev = |v: &[u64]| v.iter().rev().copied().collect::<Vec<_>>();
                assert!(rev(&pair[0]) < rev(&pair[1]), "degree {i}: {pair:?}");
            }
        }
    }

    #[test]
    fn basis_index_inverts_enumeration() {
        for (degrees, p) in [(vec![4u64, 3, 2], 3u64), (vec![6, 5, 4, 2], 5), (vec![12, 9, 3], 5)] {
            let a = ci(&degrees, p);
            for i in 0..=a.socle_degree() {
                let ranker = BasisRanker::new(&a, i).unwrap();
                let basis = a.monomial_basis(i).unwrap();
                assert_eq!(ranker.dimension(), basis.len() as u64);
                for (idx, alpha) in basis.iter().enumerate() {
                    assert_eq!(ranker.index_of(alpha), Some(idx as u64), "{alpha:?}");
                    assert_eq!(a.basis_index(i, alpha).unwrap(), idx as u64);
                }
            }
        }
    }

    #[test]
    fn basis_index_rejects_non_basis_tuples() {
        let a = ci(&[2, 2, 2], 5);
        assert_eq!(a.basis_index(2, &[2, 0, 0]), Err(AlgebraError::NotABasisElement));
        assert_eq!(a.basis_index(2, &[1, 0, 0]), Err(AlgebraError::NotABasisElement));
        assert_eq!(a.basis_index(2, &[1, 1]), Err(AlgebraError::NotABasisElement));
        assert!(a.basis_index(2, &[1, 1, 0]).is_ok());
    }

    #[test]
    fn removing_drops_one_generator() {
        let a = ci(&[12, 9, 3], 5);
        assert_eq!(a.removing(0).unwrap().degrees(), &[9, 3]);
        assert_eq!(a.removing(2).unwrap().degrees(), &[12, 9]);
        assert_eq!(ci(&[2], 5).removing(0), None);
    }
}
