//! Truncated Hilbert series arithmetic: the bracket operation that cuts a
//! formal power series at its first nonpositive coefficient, the conjectured
//! series for ideals of generic forms, and the bridge that tests the
//! conjecture for one extra power via the exact quotient series.

use crate::algebra::MonomialCi;
use crate::oracle::{quotient_series, OracleConfig, OracleError};
use serde::Serialize;

/// Prefix of a formal power series up to (excluding) its first coefficient
/// that is zero or negative. Every stored coefficient is at least 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct TruncatedSeries {
    coefficients: Vec<u64>,
}

impl TruncatedSeries {
    /// Cuts `values` at the first entry <= 0. The caller must pass a window
    /// that provably contains such an entry.
    fn by_scanning(values: &[i128]) -> TruncatedSeries {
        let cut = values
            .iter()
            .position(|&v| v <= 0)
            .expect("window contains the truncation point");
        TruncatedSeries {
            coefficients: values[..cut].iter().map(|&v| v as u64).collect(),
        }
    }

    /// Wraps an already-positive prefix, as produced by the quotient series.
    pub fn from_positive_prefix(values: &[u64]) -> TruncatedSeries {
        assert!(
            values.iter().all(|&v| v >= 1),
            "a truncated series has strictly positive coefficients"
        );
        TruncatedSeries {
            coefficients: values.to_vec(),
        }
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }
}

fn checked(v: Option<i128>) -> i128 {
    v.expect("series coefficient exceeds 128 bits")
}

/// Multiplies the finite integer series `base` (zero beyond its length) by
/// `prod (1 - t^d)` over `form_degrees` and truncates at the first
/// coefficient <= 0. The product of a finite series with a polynomial dies
/// out eventually, so a truncation point always exists.
pub fn truncate_product(base: &[i64], form_degrees: &[u64]) -> TruncatedSeries {
    assert!(!form_degrees.is_empty(), "at least one form is required");
    let degree_sum: u64 = form_degrees.iter().sum();
    let window = base.len() + degree_sum as usize + 1;
    let mut values: Vec<i128> = vec![0; window];
    for (i, &b) in base.iter().enumerate() {
        values[i] = b as i128;
    }
    for &d in form_degrees {
        // (1 - t^d) in place, highest index first so old values survive.
        for i in (d as usize..window).rev() {
            values[i] = checked(values[i].checked_sub(values[i - d as usize]));
        }
    }
    TruncatedSeries::by_scanning(&values)
}

/// First coefficients of `1 / (1-t)^nvars`: the Hilbert series of the
/// polynomial ring, built by repeated prefix sums.
fn polynomial_ring_series(nvars: usize, len: usize) -> Vec<i64> {
    let mut series = vec![1i64; len];
    for _ in 1..nvars {
        for i in 1..len {
            series[i] = series[i]
                .checked_add(series[i - 1])
                .expect("series coefficient exceeds 64 bits");
        }
    }
    series
}

/// The conjectured Hilbert series for an ideal of generic forms of the
/// given degrees: `[prod (1 - t^d_i) / (1-t)^nvars]`. Characteristic-free by
/// construction. Requires at least as many forms as variables; with fewer
/// the quotient has positive dimension and the series never truncates.
pub fn froberg_series(nvars: usize, form_degrees: &[u64]) -> TruncatedSeries {
    assert!(nvars >= 1, "at least one variable is required");
    assert!(
        form_degrees.iter().all(|&d| d >= 1),
        "form degrees are positive"
    );
    assert!(
        form_degrees.len() >= nvars,
        "fewer forms than variables leaves the series positive forever"
    );
    let degree_sum: u64 = form_degrees.iter().sum();
    // The numerator polynomial has degree sum(d_i); past that everything is
    // zero, and with at least nvars forms the first nonpositive coefficient
    // of the quotient appears no later than degree sum(d_i) - nvars + 1.
    let base = polynomial_ring_series(nvars, degree_sum as usize + 2);
    let series = truncate_product(&base, form_degrees);
    debug_assert!(series.coefficients().len() <= degree_sum as usize + 1);
    series
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrobergCheck {
    pub equal: bool,
    pub computed: TruncatedSeries,
    pub conjectured: TruncatedSeries,
}

/// Compares the exact series of `A / ell^e A` against the conjectured series
/// for the degree list extended by `e`. Equality is equivalent to the weak
/// Lefschetz property of the corresponding algebra in one more variable.
pub fn check_froberg_n_plus_1(
    ci: &MonomialCi,
    extra_degree: u64,
    config: &OracleConfig,
) -> Result<FrobergCheck, OracleError> {
    assert!(extra_degree >= 1, "the extra degree is positive");
    let computed =
        TruncatedSeries::from_positive_prefix(&quotient_series(ci, extra_degree, config)?);
    let mut extended: Vec<u64> = ci.degrees().to_vec();
    extended.push(extra_degree);
    let conjectured = froberg_series(ci.num_vars(), &extended);
    Ok(FrobergCheck {
        equal: computed == conjectured,
        computed,
        conjectured,
    })
}
