//! Brute-force verification of Lefschetz properties by exact rank
//! computation over F_p.
//!
//! Everything here works with the generic linear form `ell = x_1 + ... + x_n`.
//! In each graded piece the multiplication map by `ell^m` has an explicit
//! matrix in the monomial basis whose entries are multinomial coefficients
//! mod p, so maximal rank questions reduce to exact sparse rank computations.

use crate::algebra::{AlgebraError, BasisRanker, HilbertFunction, MonomialCi};
use crate::arith::multinomial_mod_p;
use crate::linalg::SparseMatrixModP;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("characteristic {0} is too large for rank computations (p < 2^16 is required)")]
    CharacteristicTooLarge(u64),
    #[error("the degree-{degree} graded piece has dimension {dimension}, above the cap of {cap}")]
    DimensionCap { degree: u64, dimension: u64, cap: u64 },
    #[error("coefficient {index} is divisible by p; the form must have unit coefficients")]
    ZeroCoefficient { index: usize },
    #[error("witness exponent {index} is not below its degree bound")]
    MonomialOutOfBounds { index: usize },
    #[error("expected one entry per variable ({expected}), got {got}")]
    WrongArity { expected: usize, got: usize },
}

/// Resource limits for rank computations.
#[derive(Debug, Clone)]
pub struct OracleConfig {
    /// Largest graded-piece dimension a matrix side may have.
    pub dimension_cap: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            dimension_cap: 500_000,
        }
    }
}

/// How much of the injectivity range a maximal-rank check covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckDepth {
    /// Check every degree up to the middle of the range, lowest first.
    AllDegrees,
    /// Check only degrees whose graded pieces are small, then the top of the
    /// injectivity range. A kernel element strictly below the top multiplies
    /// by some variable to a nonzero kernel element one degree up, so
    /// injectivity at the top of the range implies it everywhere below.
    MiddleDegreeOnly,
}

/// Degrees at most this cheap to check are always included in the
/// `MiddleDegreeOnly` sweep; they catch most failures early.
const PREFILTER_DIM_CAP: u64 = 64;

/// One rank comparison for a map `A_i -> A_{i+m}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankCheck {
    pub from_degree: u64,
    pub to_degree: u64,
    pub domain_dim: u64,
    pub codomain_dim: u64,
    pub required: u64,
    pub rank: u64,
}

/// Ranks of `ell^m : A_i -> A_{i+m}` for every degree in the injectivity
/// range `0 <= i <= (t - m) / 2`; maximal rank there implies maximal rank in
/// all degrees by duality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub power: u64,
    pub checks: Vec<RankCheck>,
    pub has_maximal_rank: bool,
}

/// Outcome of a strong Lefschetz scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SlpOutcome {
    pub holds: bool,
    pub least_failing_power: Option<u64>,
}

fn require_small_characteristic(ci: &MonomialCi) -> Result<(), OracleError> {
    let p = ci.characteristic();
    if p >= 1 << 16 {
        return Err(OracleError::CharacteristicTooLarge(p));
    }
    Ok(())
}

fn dimension_checked(
    h: &HilbertFunction,
    degree: u64,
    config: &OracleConfig,
) -> Result<u64, OracleError> {
    let dimension = h.value(degree);
    if dimension > config.dimension_cap {
        return Err(OracleError::DimensionCap {
            degree,
            dimension,
            cap: config.dimension_cap,
        });
    }
    Ok(dimension)
}

/// Matrix of multiplication by `ell^power` from degree `from_degree` to
/// degree `from_degree + power`, in the monomial bases. Requires both
/// degrees to lie in `0..=socle_degree`.
pub fn multiplication_matrix(
    ci: &MonomialCi,
    power: u64,
    from_degree: u64,
    config: &OracleConfig,
) -> Result<SparseMatrixModP, OracleError> {
    require_small_characteristic(ci)?;
    let p = ci.characteristic();
    let socle = ci.socle_degree();
    let to_degree = from_degree + power;
    if to_degree > socle {
        return Err(AlgebraError::DegreeOutOfRange {
            degree: to_degree,
            socle,
        }
        .into());
    }
    let h = ci.hilbert_function()?;
    let rows = dimension_checked(&h, to_degree, config)?;
    let cols = dimension_checked(&h, from_degree, config)?;
    let mut matrix = SparseMatrixModP::new(rows as usize, cols as usize, p)
        .expect("characteristic is a prime below 2^16");

    // Expanding ell^power gives one term per exponent offset delta with
    // |delta| = power, weighted by multinomial(power; delta). Offsets with a
    // component >= d_j land outside the bounds for every source monomial, so
    // the offsets worth keeping are exactly the degree-`power` basis tuples
    // with a unit multinomial coefficient.
    let mut offsets: Vec<(Vec<u64>, u64)> = Vec::new();
    ci.for_each_basis_element(power, |delta| {
        let coeff = multinomial_mod_p(power, delta, p).expect("parts sum to the power");
        if coeff != 0 {
            offsets.push((delta.to_vec(), coeff));
        }
    })?;

    let ranker = BasisRanker::new(ci, to_degree)?;
    let bounds: Vec<u64> = ci.degrees().iter().map(|&d| d - 1).collect();
    let mut product = vec![0u64; ci.num_vars()];
    let mut col = 0usize;
    ci.for_each_basis_element(from_degree, |alpha| {
        'offset: for (delta, coeff) in &offsets {
            for j in 0..alpha.len() {
                let e = alpha[j] + delta[j];
                if e > bounds[j] {
                    continue 'offset;
                }
                product[j] = e;
            }
            let row = ranker
                .index_of(&product)
                .expect("in-bounds product is a basis element");
            matrix.push(row as usize, col, *coeff);
        }
        col += 1;
    })?;
    Ok(matrix)
}

/// Largest degree whose injectivity must be checked for `ell^power`, if any.
fn injectivity_top(socle: u64, power: u64) -> Option<u64> {
    if power > socle {
        // The target piece is zero in every degree, so any rank is maximal.
        None
    } else {
        Some((socle - power) / 2)
    }
}

/// Exact ranks of `ell^power` on the whole injectivity range.
pub fn power_rank_report(
    ci: &MonomialCi,
    power: u64,
    config: &OracleConfig,
) -> Result<RankReport, OracleError> {
    require_small_characteristic(ci)?;
    let h = ci.hilbert_function()?;
    let mut checks = Vec::new();
    let mut all_maximal = true;
    if let Some(top) = injectivity_top(ci.socle_degree(), power) {
        for i in 0..=top {
            let matrix = multiplication_matrix(ci, power, i, config)?;
            let rank = matrix.rank();
            let domain_dim = h.value(i);
            let codomain_dim = h.value(i + power);
            let required = domain_dim.min(codomain_dim);
            debug_assert_eq!(required, domain_dim, "range should force injectivity");
            all_maximal &= rank == required;
            checks.push(RankCheck {
                from_degree: i,
                to_degree: i + power,
                domain_dim,
                codomain_dim,
                required,
                rank,
            });
        }
    }
    Ok(RankReport {
        power,
        checks,
        has_maximal_rank: all_maximal,
    })
}

/// Whether `ell^power` has maximal rank in every degree. Stops at the first
/// failure; `depth` controls how many degrees are examined on success.
pub fn power_has_maximal_rank(
    ci: &MonomialCi,
    power: u64,
    depth: CheckDepth,
    config: &OracleConfig,
) -> Result<bool, OracleError> {
    require_small_characteristic(ci)?;
    let Some(top) = injectivity_top(ci.socle_degree(), power) else {
        return Ok(true);
    };
    let h = ci.hilbert_function()?;
    for i in 0..=top {
        let skippable = depth == CheckDepth::MiddleDegreeOnly && i < top;
        if skippable && h.value(i) > PREFILTER_DIM_CAP {
            continue;
        }
        let injective = multiplication_matrix(ci, power, i, config)?.has_full_column_rank();
        if !injective {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Weak Lefschetz check straight from the definition: maximal rank of
/// `ell : A_i -> A_{i+1}` in every degree.
pub fn verify_wlp(
    ci: &MonomialCi,
    depth: CheckDepth,
    config: &OracleConfig,
) -> Result<bool, OracleError> {
    power_has_maximal_rank(ci, 1, depth, config)
}

/// Weak Lefschetz check through the one-variable reduction: A has the weak
/// Lefschetz property exactly when multiplication by `s^D` has maximal rank
/// on the algebra B obtained by deleting the largest-degree variable, where
/// D is that largest degree and s is the sum of the remaining variables.
/// This trades one variable for a higher power and is usually much cheaper.
pub fn verify_wlp_reduced(
    ci: &MonomialCi,
    depth: CheckDepth,
    config: &OracleConfig,
) -> Result<bool, OracleError> {
    require_small_characteristic(ci)?;
    let Some(reduced) = ci.removing(0) else {
        // One variable: multiplication by it shifts the basis, so every map
        // has maximal rank.
        return Ok(true);
    };
    power_has_maximal_rank(&reduced, ci.degrees()[0], depth, config)
}

/// Strong Lefschetz scan: checks `ell^m` for `m = 1, 2, ...` up to the socle
/// degree (higher powers act as zero maps to zero spaces) and reports the
/// first failing power, if any.
pub fn verify_slp(
    ci: &MonomialCi,
    depth: CheckDepth,
    config: &OracleConfig,
) -> Result<SlpOutcome, OracleError> {
    require_small_characteristic(ci)?;
    for power in 1..=ci.socle_degree() {
        if !power_has_maximal_rank(ci, power, depth, config)? {
            return Ok(SlpOutcome {
                holds: false,
                least_failing_power: Some(power),
            });
        }
    }
    Ok(SlpOutcome {
        holds: true,
        least_failing_power: None,
    })
}

/// Hilbert series of `A / (ell^power)`, with the trailing zero tail trimmed.
/// Once some graded piece of the quotient vanishes, multiplication by the
/// power is onto from there up (multiplying a spanning image by the
/// variables spans the next degree), so the series is cut at the first zero.
pub fn quotient_series(
    ci: &MonomialCi,
    power: u64,
    config: &OracleConfig,
) -> Result<Vec<u64>, OracleError> {
    require_small_characteristic(ci)?;
    let h = ci.hilbert_function()?;
    let socle = ci.socle_degree();
    let mut series = Vec::new();
    for i in 0..=socle {
        let dim = if i >= power {
            h.value(i) - multiplication_matrix(ci, power, i - power, config)?.rank()
        } else {
            h.value(i)
        };
        if dim == 0 && i >= power {
            break;
        }
        series.push(dim);
    }
    Ok(series)
}

/// Whether `x^alpha * (c_1 x_1 + ... + c_n x_n)^power` vanishes in A, for a
/// form whose coefficients are all units mod p. Distinct expansion terms
/// carry distinct monomials, so the product vanishes exactly when every
/// in-bounds term has a multinomial coefficient divisible by p. Works for
/// any prime characteristic.
pub fn witness_product_is_zero(
    ci: &MonomialCi,
    coefficients: &[u64],
    power: u64,
    alpha: &[u64],
) -> Result<bool, OracleError> {
    let n = ci.num_vars();
    let p = ci.characteristic();
    if coefficients.len() != n {
        return Err(OracleError::WrongArity {
            expected: n,
            got: coefficients.len(),
        });
    }
    if alpha.len() != n {
        return Err(OracleError::WrongArity {
            expected: n,
            got: alpha.len(),
        });
    }
    for (index, &c) in coefficients.iter().enumerate() {
        if c % p == 0 {
            return Err(OracleError::ZeroCoefficient { index });
        }
    }
    let mut caps = vec![0u64; n];
    for (index, (&a, &d)) in alpha.iter().zip(ci.degrees()).enumerate() {
        if a >= d {
            return Err(OracleError::MonomialOutOfBounds { index });
        }
        caps[index] = d - 1 - a;
    }
    let mut delta = vec![0u64; n];
    Ok(!some_term_is_unit(&caps, &mut delta, 0, power, power, p))
}

/// Depth-first search over offsets `delta <= caps` with `|delta| = power`;
/// true when some offset has a unit multinomial coefficient.
fn some_term_is_unit(
    caps: &[u64],
    delta: &mut [u64],
    index: usize,
    remaining: u64,
    power: u64,
    p: u64,
) -> bool {
    if index == caps.len() {
        return remaining == 0
            && multinomial_mod_p(power, delta, p).expect("parts sum to the power") != 0;
    }
    let limit = caps[index].min(remaining);
    for v in 0..=limit {
        delta[index] = v;
        if some_term_is_unit(caps, delta, index + 1, remaining - v, power, p) {
            return true;
        }
    }
    delta[index] = 0;
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn ci(degrees: &[u64], p: u64) -> MonomialCi {
        MonomialCi::new(degrees, p).unwrap()
    }

    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    /// Multiplies a vector of monomial coefficients by `x_1 + ... + x_n`,
    /// dropping anything that leaves the bounds. Test-only reference model.
    fn naive_times_ell(
        degrees: &[u64],
        p: u64,
        vector: &BTreeMap<Vec<u64>, u64>,
    ) -> BTreeMap<Vec<u64>, u64> {
        let mut out: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
        for (alpha, &coeff) in vector {
            for j in 0..degrees.len() {
                let mut next = alpha.clone();
                next[j] += 1;
                if next[j] >= degrees[j] {
                    continue;
                }
                let cell = out.entry(next).or_insert(0);
                *cell = (*cell + coeff) % p;
            }
        }
        out.retain(|_, v| *v != 0);
        out
    }

    #[test]
    fn matrix_columns_match_naive_polynomial_multiplication() {
        for &(degrees, p) in &[
            (&[3u64, 2, 2][..], 2u64),
            (&[3, 2, 2][..], 3),
            (&[4, 3, 2][..], 5),
            (&[5, 4][..], 3),
        ] {
            let a = ci(degrees, p);
            let socle = a.socle_degree();
            for power in 0..=socle {
                for from in 0..=(socle - power) {
                    let matrix = multiplication_matrix(&a, power, from, &cfg()).unwrap();
                    let codomain = a.monomial_basis(from + power).unwrap();
                    for (col, alpha) in a.monomial_basis(from).unwrap().into_iter().enumerate() {
                        let mut vector = BTreeMap::from([(alpha, 1u64)]);
                        for _ in 0..power {
                            vector = naive_times_ell(a.degrees(), p, &vector);
                        }
                        let mut unit = vec![0u64; matrix.ncols()];
                        unit[col] = 1;
                        let column = matrix.apply(&unit);
                        for (row, gamma) in codomain.iter().enumerate() {
                            let expect = vector.get(gamma).copied().unwrap_or(0);
                            assert_eq!(column[row], expect, "{degrees:?} p={p} m={power} i={from}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cube_relation_collapses_matrix() {
        // In three squares mod 2, ell^3 multiplies the unit into
        // 6xyz = 0, so the 1x1 matrix from degree 0 to the socle is zero.
        let a = ci(&[2, 2, 2], 2);
        let matrix = multiplication_matrix(&a, 3, 0, &cfg()).unwrap();
        assert_eq!((matrix.nrows(), matrix.ncols()), (1, 1));
        assert_eq!(matrix.rank(), 0);
        assert_eq!(matrix.apply(&[1]), vec![0]);
    }

    #[test]
    fn zero_power_gives_identity() {
        let a = ci(&[2, 2, 2], 2);
        let matrix = multiplication_matrix(&a, 0, 1, &cfg()).unwrap();
        assert_eq!((matrix.nrows(), matrix.ncols()), (3, 3));
        assert_eq!(matrix.rank(), 3);
        assert_eq!(matrix.apply(&[4, 5, 6]), vec![0, 1, 0]);
    }

    #[test]
    fn first_power_matrix_in_two_squares() {
        let a = ci(&[2, 2], 5);
        let matrix = multiplication_matrix(&a, 1, 0, &cfg()).unwrap();
        assert_eq!((matrix.nrows(), matrix.ncols()), (2, 1));
        assert_eq!(matrix.apply(&[1]), vec![1, 1]);
    }

    #[test]
    fn out_of_range_degree_is_rejected() {
        let a = ci(&[2, 2], 5);
        assert_eq!(
            multiplication_matrix(&a, 4, 0, &cfg()).unwrap_err(),
            OracleError::Algebra(AlgebraError::DegreeOutOfRange {
                degree: 4,
                socle: 2
            })
        );
    }

    #[test]
    fn rank_report_records_every_degree_in_range() {
        let a = ci(&[2, 2, 2], 2);
        let report = power_rank_report(&a, 1, &cfg()).unwrap();
        assert_eq!(report.power, 1);
        assert_eq!(report.checks.len(), 2);
        assert_eq!(report.checks[0].rank, 1);
        assert_eq!(report.checks[0].required, 1);
        assert_eq!(report.checks[1].rank, 2);
        assert_eq!(report.checks[1].required, 3);
        assert!(!report.has_maximal_rank);

        let cube = power_rank_report(&a, 3, &cfg()).unwrap();
        assert_eq!(cube.checks.len(), 1);
        assert_eq!(cube.checks[0].from_degree, 0);
        assert_eq!(cube.checks[0].rank, 0);
        assert!(!cube.has_maximal_rank);

        assert!(power_rank_report(&ci(&[2, 2, 2], 7), 1, &cfg())
            .unwrap()
            .has_maximal_rank);
    }

    #[test]
    fn fifteenth_power_degenerates_in_mixed_degrees() {
        let a = ci(&[12, 9, 3], 5);
        let report = power_rank_report(&a, 15, &cfg()).unwrap();
        assert!(!report.has_maximal_rank);
        assert!(!power_has_maximal_rank(&a, 15, CheckDepth::AllDegrees, &cfg()).unwrap());
    }

    #[test]
    fn weak_lefschetz_examples() {
        assert!(!verify_wlp(&ci(&[2, 2, 2], 2), CheckDepth::AllDegrees, &cfg()).unwrap());
        assert!(verify_wlp(&ci(&[2, 2], 2), CheckDepth::AllDegrees, &cfg()).unwrap());
        assert!(verify_wlp(&ci(&[2, 2, 2, 6, 8], 5), CheckDepth::AllDegrees, &cfg()).unwrap());
    }

    #[test]
    fn strong_lefschetz_examples() {
        // The cube already degenerates: a 26x26 square map at degree 9 drops
        // to rank 25. Higher powers (15, 20) fail too, but 3 is the least.
        let mixed = verify_slp(&ci(&[12, 9, 3], 5), CheckDepth::AllDegrees, &cfg()).unwrap();
        assert!(!mixed.holds);
        assert_eq!(mixed.least_failing_power, Some(3));

        let small = verify_slp(&ci(&[2, 2, 2], 7), CheckDepth::AllDegrees, &cfg()).unwrap();
        assert!(small.holds);
        assert_eq!(small.least_failing_power, None);

        assert!(verify_slp(&ci(&[8, 2, 2], 5), CheckDepth::AllDegrees, &cfg())
            .unwrap()
            .holds);
    }

    #[test]
    fn quotient_series_examples() {
        assert_eq!(
            quotient_series(&ci(&[2, 2], 2), 2, &cfg()).unwrap(),
            vec![1, 2, 1]
        );
        assert_eq!(
            quotient_series(&ci(&[2, 2], 3), 2, &cfg()).unwrap(),
            vec![1, 2]
        );
        assert_eq!(
            quotient_series(&ci(&[2, 2, 2], 5), 2, &cfg()).unwrap(),
            vec![1, 3, 2]
        );
        // A power past the socle degree leaves the algebra untouched.
        assert_eq!(
            quotient_series(&ci(&[2, 2], 5), 9, &cfg()).unwrap(),
            vec![1, 2, 1]
        );
    }

    #[test]
    fn witness_examples() {
        let a = ci(&[12, 9, 3], 5);
        assert_eq!(
            witness_product_is_zero(&a, &[1, 1, 1], 15, &[2, 0, 0]),
            Ok(true)
        );
        assert_eq!(
            witness_product_is_zero(&a, &[1, 1, 1], 10, &[2, 4, 0]),
            Ok(true)
        );
        assert_eq!(
            witness_product_is_zero(&a, &[1, 1, 1], 1, &[0, 0, 0]),
            Ok(false)
        );
        assert_eq!(
            witness_product_is_zero(&a, &[1, 5, 1], 15, &[2, 0, 0]),
            Err(OracleError::ZeroCoefficient { index: 1 })
        );
        assert_eq!(
            witness_product_is_zero(&a, &[1, 1, 1], 15, &[12, 0, 0]),
            Err(OracleError::MonomialOutOfBounds { index: 0 })
        );
        assert_eq!(
            witness_product_is_zero(&a, &[1, 1], 15, &[2, 0, 0]),
            Err(OracleError::WrongArity {
                expected: 3,
                got: 2
            })
        );
        // Vanishing is decided by multinomial divisibility alone, so a large
        // characteristic is fine here.
        let big = ci(&[3, 3], 65537);
        assert_eq!(
            witness_product_is_zero(&big, &[1, 1], 1, &[0, 0]),
            Ok(false)
        );
    }

    #[test]
    fn rank_work_needs_small_characteristic() {
        let a = ci(&[3, 3], 65537);
        assert_eq!(
            verify_wlp(&a, CheckDepth::AllDegrees, &cfg()).unwrap_err(),
            OracleError::CharacteristicTooLarge(65537)
        );
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let tight = OracleConfig { dimension_cap: 2 };
        assert_eq!(
            verify_wlp(&ci(&[2, 2, 2], 7), CheckDepth::AllDegrees, &tight).unwrap_err(),
            OracleError::DimensionCap {
                degree: 1,
                dimension: 3,
                cap: 2
            }
        );
    }

    #[test]
    fn reduced_route_agrees_with_direct_route() {
        for p in [2u64, 3, 5, 7] {
            for degrees in [
                &[2u64][..],
                &[4][..],
                &[2, 2][..],
                &[4, 3][..],
                &[2, 2, 2][..],
                &[3, 2, 2][..],
                &[3, 3, 2][..],
                &[4, 3, 3][..],
                &[4, 4, 4][..],
                &[3, 2, 2, 2][..],
                &[3, 3, 2, 2][..],
            ] {
                let a = ci(degrees, p);
                let direct = verify_wlp(&a, CheckDepth::AllDegrees, &cfg()).unwrap();
                let reduced = verify_wlp_reduced(&a, CheckDepth::AllDegrees, &cfg()).unwrap();
                assert_eq!(direct, reduced, "{degrees:?} p={p}");
            }
        }
    }

    #[test]
    fn middle_degree_shortcut_agrees_with_full_sweep() {
        for p in [2u64, 3, 5] {
            for degrees in [
                &[4u64, 3, 2][..],
                &[4, 4, 3][..],
                &[3, 3, 3][..],
                &[5, 4, 4][..],
                &[3, 3, 2, 2][..],
            ] {
                let a = ci(degrees, p);
                for power in 1..=a.socle_degree() {
                    let full =
                        power_has_maximal_rank(&a, power, CheckDepth::AllDegrees, &cfg()).unwrap();
                    let fast =
                        power_has_maximal_rank(&a, power, CheckDepth::MiddleDegreeOnly, &cfg())
                            .unwrap();
                    assert_eq!(full, fast, "{degrees:?} p={p} m={power}");
                    let report = power_rank_report(&a, power, &cfg()).unwrap();
                    assert_eq!(report.has_maximal_rank, full, "{degrees:?} p={p} m={power}");
                }
            }
        }
    }
}
