//! Parameter-space sweeps: for every non-decreasing degree tuple in a box,
//! decide the weak Lefschetz property (rules first, reduced-route oracle for
//! the rest) and count how much of the positive region beyond the
//! large-characteristic bound each explanatory mechanism covers.
//!
//! Tuples in this module travel in ascending order, matching the survey
//! convention of filtering on the smallest degree; `MonomialCi` re-sorts
//! internally, so only cache keys and filters care.

use crate::algebra::MonomialCi;
use crate::arith::{is_prime, multinomial_divisible_by_p};
use crate::classify::{classify_wlp, Status};
use crate::oracle::{verify_wlp_reduced, CheckDepth, OracleConfig, OracleError};
use dashmap::DashMap;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SurveyError {
    #[error("degree range {min}..{max} is empty or starts below 2")]
    InvalidRange { min: u64, max: u64 },
    #[error("a survey needs at least two variables, got {0}")]
    TooFewVariables(usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Filter on the smallest degree of the tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Partition {
    #[serde(rename = "all")]
    All,
    #[serde(rename = "d1=2")]
    MinEquals2,
    #[serde(rename = "d1>=3")]
    MinAtLeast3,
    #[serde(rename = "d1>=4")]
    MinAtLeast4,
}

impl Partition {
    fn admits(self, min_degree: u64) -> bool {
        match self {
            Partition::All => true,
            Partition::MinEquals2 => min_degree == 2,
            Partition::MinAtLeast3 => min_degree >= 3,
            Partition::MinAtLeast4 => min_degree >= 4,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Partition::All => "all",
            Partition::MinEquals2 => "d1=2",
            Partition::MinAtLeast3 => "d1>=3",
            Partition::MinAtLeast4 => "d1>=4",
        }
    }
}

impl FromStr for Partition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(Partition::All),
            "d1=2" => Ok(Partition::MinEquals2),
            "d1>=3" => Ok(Partition::MinAtLeast3),
            "d1>=4" => Ok(Partition::MinAtLeast4),
            other => Err(format!(
                "unknown partition {other:?}; expected all, d1=2, d1>=3 or d1>=4"
            )),
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Which reading of the square-adjoining set to use: `Caption` only asks the
/// prefix to have the WLP; `Strict` additionally requires the prefix's socle
/// degree to be odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SetDefs {
    #[serde(rename = "caption")]
    Caption,
    #[serde(rename = "strict")]
    Strict,
}

impl SetDefs {
    pub fn label(self) -> &'static str {
        match self {
            SetDefs::Caption => "caption",
            SetDefs::Strict => "strict",
        }
    }
}

impl FromStr for SetDefs {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "caption" => Ok(SetDefs::Caption),
            "strict" => Ok(SetDefs::Strict),
            other => Err(format!(
                "unknown set definition mode {other:?}; expected caption or strict"
            )),
        }
    }
}

impl fmt::Display for SetDefs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SurveyParams {
    pub vars: usize,
    pub min_degree: u64,
    pub max_degree: u64,
    #[serde(rename = "char")]
    pub characteristic: u64,
    pub partition: Partition,
    pub set_defs: SetDefs,
}

/// Table counts: `holds_beyond_bound` is the population (WLP holds, the
/// large-characteristic bound does not apply); the next three count the
/// overlapping explanatory subsets; `unexplained` is what none of them cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SurveyCounts {
    pub holds_beyond_bound: u64,
    pub via_reduction: u64,
    pub via_multinomial: u64,
    pub via_square: u64,
    pub unexplained: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyRow {
    #[serde(flatten)]
    pub params: SurveyParams,
    pub counts: SurveyCounts,
    pub tuples_total: u64,
    pub tuples_skipped: u64,
    pub wall_time_ms: u64,
}

impl SurveyRow {
    pub const CSV_HEADER: &'static str = "n,d_min,d_max,p,partition,set_defs,A,B,C,D,remainder,skipped";

    /// One CSV line matching `CSV_HEADER`; deliberately excludes wall time
    /// so identical runs produce identical bytes.
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.params.vars,
            self.params.min_degree,
            self.params.max_degree,
            self.params.characteristic,
            self.params.partition,
            self.params.set_defs,
            self.counts.holds_beyond_bound,
            self.counts.via_reduction,
            self.counts.via_multinomial,
            self.counts.via_square,
            self.counts.unexplained,
            self.tuples_skipped,
        )
    }
}

/// Shared store of per-tuple WLP verdicts, optionally persisted to an
/// append-only line file (`d1,..,dn;p;wlp|nowlp;rule`) keyed by the ascending
/// degree list plus the characteristic. Used both for resuming interrupted
/// surveys and for sharing base-tuple work between detectors.
pub struct WlpCache {
    map: DashMap<(Vec<u64>, u64), (bool, String)>,
    writer: Option<Mutex<BufWriter<File>>>,
}

impl WlpCache {
    pub fn in_memory() -> WlpCache {
        WlpCache {
            map: DashMap::new(),
            writer: None,
        }
    }

    /// Loads any existing lines (malformed ones are skipped with a warning
    /// on stderr) and appends new verdicts to the same file.
    pub fn with_file(path: &Path) -> io::Result<WlpCache> {
        let map = DashMap::new();
        match File::open(path) {
            Ok(existing) => {
                for (number, line) in BufReader::new(existing).lines().enumerate() {
                    let line = line?;
                    if line.is_empty() {
                        continue;
                    }
                    match parse_cache_line(&line) {
                        Some((key, value)) => {
                            map.insert(key, value);
                        }
                        None => eprintln!(
                            "warning: {}:{}: malformed cache line skipped",
                            path.display(),
                            number + 1
                        ),
                    }
                }
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(e),
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(WlpCache {
            map,
            writer: Some(Mutex::new(BufWriter::new(file))),
        })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    fn lookup(&self, ascending: &[u64], p: u64) -> Option<bool> {
        self.map
            .get(&(ascending.to_vec(), p))
            .map(|entry| entry.value().0)
    }

    fn record(&self, ascending: Vec<u64>, p: u64, holds: bool, rule: &str) {
        if let Some(writer) = &self.writer {
            let degrees = ascending
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(",");
            let tag = if holds { "wlp" } else { "nowlp" };
            let mut writer = writer.lock().expect("cache writer poisoned");
            // Flush line by line so an interrupted survey can still resume.
            let _ = writeln!(writer, "{degrees};{p};{tag};{rule}");
            let _ = writer.flush();
        }
        self.map.insert((ascending, p), (holds, rule.to_owned()));
    }
}

fn parse_cache_line(line: &str) -> Option<((Vec<u64>, u64), (bool, String))> {
    let mut fields = line.splitn(4, ';');
    let degrees: Vec<u64> = fields
        .next()?
        .split(',')
        .map(|d| d.parse().ok())
        .collect::<Option<_>>()?;
    let p: u64 = fields.next()?.parse().ok()?;
    let holds = match fields.next()? {
        "wlp" => true,
        "nowlp" => false,
        _ => return None,
    };
    let rule = fields.next()?;
    if degrees.is_empty() || !degrees.windows(2).all(|w| w[0] <= w[1]) {
        return None;
    }
    Some(((degrees, p), (holds, rule.to_owned())))
}

/// The survey's WLP decision: closed-form rules first, then the reduced
/// oracle route (maximal rank of multiplication by the largest-degree power
/// on the algebra without that generator), which the acceptance grids
/// validate against the direct check. Verdicts go through `cache`.
pub fn wlp_via_cache(
    ci: &MonomialCi,
    cache: &WlpCache,
    config: &OracleConfig,
) -> Result<bool, OracleError> {
    let mut ascending = ci.degrees().to_vec();
    ascending.reverse();
    let p = ci.characteristic();
    if let Some(holds) = cache.lookup(&ascending, p) {
        return Ok(holds);
    }
    let verdict = classify_wlp(ci);
    let (holds, rule) = match verdict.status {
        Status::Holds => (true, verdict.rule),
        Status::Fails => (false, verdict.rule),
        Status::Unknown => {
            let holds = verify_wlp_reduced(ci, CheckDepth::MiddleDegreeOnly, config)?;
            (holds, "oracle".to_owned())
        }
    };
    cache.record(ascending, p, holds, &rule);
    Ok(holds)
}

/// Whether the large-characteristic sufficiency bound applies: WLP is then
/// automatic and the tuple is excluded from the population of interest.
fn bound_applies(ci: &MonomialCi) -> bool {
    let largest = ci.degrees()[0];
    2 * ci.characteristic().max(largest) > ci.socle_degree() + 1
}

/// Detector for the reduction set: some valid lowering of the two largest
/// degrees by b*p^a (p^a covering every other degree) lands on a tuple that
/// has the WLP and whose two lowered degrees still outweigh the rest.
fn detected_by_reduction(
    ci: &MonomialCi,
    cache: &WlpCache,
    config: &OracleConfig,
) -> Result<bool, OracleError> {
    let degrees = ci.degrees();
    let p = ci.characteristic();
    let second = degrees[1];
    let rest_max = *degrees[2..].iter().max().expect("three or more degrees");
    let rest_weight: u64 = degrees[2..].iter().map(|&d| d - 1).sum();
    let mut step = p;
    while second >= step + 2 {
        if step >= rest_max {
            for b in 1..=(second - 2) / step {
                let mut shrunk = degrees.to_vec();
                shrunk[0] -= b * step;
                shrunk[1] -= b * step;
                if shrunk[0] + shrunk[1] < rest_weight {
                    continue;
                }
                let base = MonomialCi::new(&shrunk, p).expect("reduced degrees stay at least 2");
                if wlp_via_cache(&base, cache, config)? {
                    return Ok(true);
                }
            }
        }
        let next = step.saturating_mul(p);
        if next == step {
            break;
        }
        step = next;
    }
    Ok(false)
}

/// Detector for the multinomial set: the largest degree matches the weight
/// of the rest exactly or falls one short, with the corresponding
/// multinomial coefficient a unit mod p.
fn detected_by_multinomial(ci: &MonomialCi) -> bool {
    let degrees = ci.degrees();
    let p = ci.characteristic();
    let largest = degrees[0];
    let rest_weight: u64 = degrees[1..].iter().map(|&d| d - 1).sum();
    let rest_parts: Vec<u64> = degrees[1..].iter().map(|&d| d - 1).collect();
    if largest == rest_weight {
        return !multinomial_divisible_by_p(largest, &rest_parts, p)
            .expect("parts sum to the largest degree");
    }
    if largest + 1 == rest_weight {
        return !multinomial_divisible_by_p(largest + 1, &rest_parts, p)
            .expect("parts sum to one more than the largest degree");
    }
    false
}

/// Detector for the square set: the tuple ends in a 2 whose removal leaves a
/// prefix with the WLP; strict mode also wants the prefix's socle degree odd.
fn detected_by_square(
    ci: &MonomialCi,
    set_defs: SetDefs,
    cache: &WlpCache,
    config: &OracleConfig,
) -> Result<bool, OracleError> {
    let degrees = ci.degrees();
    if degrees.last() != Some(&2) || degrees.len() < 2 {
        return Ok(false);
    }
    let prefix = MonomialCi::new(&degrees[..degrees.len() - 1], ci.characteristic())
        .expect("prefix degrees stay valid");
    if set_defs == SetDefs::Strict && prefix.socle_degree() % 2 == 0 {
        return Ok(false);
    }
    wlp_via_cache(&prefix, cache, config)
}

#[derive(Debug, Clone, Copy, Default)]
struct TupleOutcome {
    in_a: bool,
    in_b: bool,
    in_c: bool,
    in_d: bool,
    skipped: bool,
}

/// Oversized instances are recorded as skips instead of failing the sweep.
fn soft<T>(result: Result<T, OracleError>) -> Result<Option<T>, OracleError> {
    match result {
        Ok(v) => Ok(Some(v)),
        Err(OracleError::DimensionCap { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn evaluate_tuple(
    ascending: &[u64],
    params: &SurveyParams,
    cache: &WlpCache,
    config: &OracleConfig,
) -> Result<TupleOutcome, OracleError> {
    let ci = MonomialCi::new(ascending, params.characteristic).expect("enumerated degrees valid");
    let skipped = Ok(TupleOutcome {
        skipped: true,
        ..TupleOutcome::default()
    });
    let Some(holds) = soft(wlp_via_cache(&ci, cache, config))? else {
        return skipped;
    };
    if !holds || bound_applies(&ci) {
        return Ok(TupleOutcome::default());
    }
    let Some(in_b) = soft(detected_by_reduction(&ci, cache, config))? else {
        return skipped;
    };
    let in_c = detected_by_multinomial(&ci);
    let Some(in_d) = soft(detected_by_square(&ci, params.set_defs, cache, config))? else {
        return skipped;
    };
    Ok(TupleOutcome {
        in_a: true,
        in_b,
        in_c,
        in_d,
        skipped: false,
    })
}

fn ascending_tuples(n: usize, lo: u64, hi: u64) -> Vec<Vec<u64>> {
    let mut tuples = Vec::new();
    let mut current = Vec::with_capacity(n);
    fn extend(tuples: &mut Vec<Vec<u64>>, current: &mut Vec<u64>, n: usize, lo: u64, hi: u64) {
        if current.len() == n {
            tuples.push(current.clone());
            return;
        }
        for d in lo..=hi {
            current.push(d);
            extend(tuples, current, n, d, hi);
            current.pop();
        }
    }
    extend(&mut tuples, &mut current, n, lo, hi);
    tuples
}

/// Sweeps every non-decreasing tuple in the box that the partition admits,
/// classifying in parallel (`jobs` = 0 uses all cores) with deterministic
/// count aggregation. Oversized tuples are counted as skipped; with
/// `progress` set, a running tally goes to stderr.
pub fn survey(
    params: &SurveyParams,
    cache: &WlpCache,
    config: &OracleConfig,
    jobs: usize,
    progress: bool,
) -> Result<SurveyRow, SurveyError> {
    if params.min_degree < 2 || params.min_degree > params.max_degree {
        return Err(SurveyError::InvalidRange {
            min: params.min_degree,
            max: params.max_degree,
        });
    }
    if params.vars < 2 {
        return Err(SurveyError::TooFewVariables(params.vars));
    }
    if !is_prime(params.characteristic) {
        return Err(SurveyError::NotPrime(params.characteristic));
    }

    let started = Instant::now();
    let tuples: Vec<Vec<u64>> = ascending_tuples(params.vars, params.min_degree, params.max_degree)
        .into_iter()
        .filter(|t| params.partition.admits(t[0]))
        .collect();
    let total = tuples.len() as u64;
    let done = AtomicU64::new(0);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| SurveyError::Pool(e.to_string()))?;
    let outcomes: Result<Vec<TupleOutcome>, OracleError> = pool.install(|| {
        tuples
            .par_iter()
            .map(|t| {
                let outcome = evaluate_tuple(t, params, cache, config);
                let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
                if progress && finished % 1000 == 0 {
                    eprintln!("survey: {finished}/{total} tuples");
                }
                outcome
            })
            .collect()
    });

    let mut counts = SurveyCounts {
        holds_beyond_bound: 0,
        via_reduction: 0,
        via_multinomial: 0,
        via_square: 0,
        unexplained: 0,
    };
    let mut tuples_skipped = 0;
    for outcome in outcomes? {
        if outcome.skipped {
            tuples_skipped += 1;
            continue;
        }
        counts.holds_beyond_bound += outcome.in_a as u64;
        counts.via_reduction += outcome.in_b as u64;
        counts.via_multinomial += outcome.in_c as u64;
        counts.via_square += outcome.in_d as u64;
        counts.unexplained +=
            (outcome.in_a && !(outcome.in_b || outcome.in_c || outcome.in_d)) as u64;
    }
    debug_assert!(counts.via_reduction <= counts.holds_beyond_bound);
    debug_assert!(counts.via_multinomial <= counts.holds_beyond_bound);
    debug_assert!(counts.via_square <= counts.holds_beyond_bound);
    debug_assert!(counts.unexplained <= counts.holds_beyond_bound);

    Ok(SurveyRow {
        params: *params,
        counts,
        tuples_total: total,
        tuples_skipped,
        wall_time_ms: started.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(vars: usize, lo: u64, hi: u64, p: u64) -> SurveyParams {
        SurveyParams {
            vars,
            min_degree: lo,
            max_degree: hi,
            characteristic: p,
            partition: Partition::All,
            set_defs: SetDefs::Caption,
        }
    }

    #[test]
    fn enumeration_counts_non_decreasing_tuples() {
        assert_eq!(ascending_tuples(3, 2, 4).len(), 10);
        assert_eq!(ascending_tuples(1, 2, 5).len(), 4);
        let filtered: Vec<_> = ascending_tuples(3, 2, 4)
            .into_iter()
            .filter(|t| Partition::MinEquals2.admits(t[0]))
            .collect();
        assert_eq!(filtered.len(), 6);
        let rest: Vec<_> = ascending_tuples(3, 2, 4)
            .into_iter()
            .filter(|t| Partition::MinAtLeast3.admits(t[0]))
            .collect();
        assert_eq!(rest.len(), 4);
    }

    #[test]
    fn partition_labels_round_trip() {
        for p in [
            Partition::All,
            Partition::MinEquals2,
            Partition::MinAtLeast3,
            Partition::MinAtLeast4,
        ] {
            assert_eq!(p.label().parse::<Partition>().unwrap(), p);
        }
        assert!("d1=3".parse::<Partition>().is_err());
        for m in [SetDefs::Caption, SetDefs::Strict] {
            assert_eq!(m.label().parse::<SetDefs>().unwrap(), m);
        }
    }

    #[test]
    fn smoke_survey_is_internally_consistent() {
        let cache = WlpCache::in_memory();
        let config = OracleConfig::default();
        let row = survey(&params(3, 2, 5, 3), &cache, &config, 1, false).unwrap();
        assert_eq!(row.tuples_total, 20);
        assert_eq!(row.tuples_skipped, 0);
        let c = &row.counts;
        assert!(c.via_reduction <= c.holds_beyond_bound);
        assert!(c.via_multinomial <= c.holds_beyond_bound);
        assert!(c.via_square <= c.holds_beyond_bound);
        assert!(c.unexplained <= c.holds_beyond_bound);
    }

    #[test]
    fn partitions_split_the_population() {
        let cache = WlpCache::in_memory();
        let config = OracleConfig::default();
        let all = survey(&params(3, 2, 4, 5), &cache, &config, 1, false).unwrap();
        let two = survey(
            &SurveyParams {
                partition: Partition::MinEquals2,
                ..params(3, 2, 4, 5)
            },
            &cache,
            &config,
            1,
            false,
        )
        .unwrap();
        let rest = survey(
            &SurveyParams {
                partition: Partition::MinAtLeast3,
                ..params(3, 2, 4, 5)
            },
            &cache,
            &config,
            1,
            false,
        )
        .unwrap();
        assert_eq!(all.tuples_total, two.tuples_total + rest.tuples_total);
        assert_eq!(
            all.counts.holds_beyond_bound,
            two.counts.holds_beyond_bound + rest.counts.holds_beyond_bound
        );
    }

    #[test]
    fn job_count_does_not_change_the_row() {
        let config = OracleConfig::default();
        let serial = survey(&params(4, 2, 4, 3), &WlpCache::in_memory(), &config, 1, false).unwrap();
        let parallel =
            survey(&params(4, 2, 4, 3), &WlpCache::in_memory(), &config, 3, false).unwrap();
        assert_eq!(serial.counts, parallel.counts);
        assert_eq!(serial.tuples_total, parallel.tuples_total);
        assert_eq!(serial.csv_line(), parallel.csv_line());
    }

    #[test]
    fn cache_file_round_trips_and_resumes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("verdicts.cache");
        let config = OracleConfig::default();

        let cache = WlpCache::with_file(&path).unwrap();
        let cold = survey(&params(3, 2, 4, 3), &cache, &config, 1, false).unwrap();
        assert!(cache.len() > 0);
        drop(cache);

        let reloaded = WlpCache::with_file(&path).unwrap();
        assert!(!reloaded.is_empty());
        let warm = survey(&params(3, 2, 4, 3), &reloaded, &config, 1, false).unwrap();
        assert_eq!(cold.counts, warm.counts);
        assert_eq!(cold.csv_line(), warm.csv_line());
    }

    #[test]
    fn malformed_cache_lines_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("verdicts.cache");
        std::fs::write(
            &path,
            "2,2,3;5;wlp;WLP:T4.5\nnot a line\n3,2;5;wlp;oops-descending\n2,2;xx;wlp;r\n",
        )
        .unwrap();
        let cache = WlpCache::with_file(&path).unwrap();
        assert_eq!(cache.len(), 1);
        assert_eq!(cache.lookup(&[2, 2, 3], 5), Some(true));
    }

    #[test]
    fn cached_verdicts_are_preferred_over_recomputation() {
        let cache = WlpCache::in_memory();
        let config = OracleConfig::default();
        // Seed a deliberately wrong verdict; the lookup must win.
        cache.record(vec![2, 2, 3], 7, false, "seeded");
        let ci = MonomialCi::new(&[2, 2, 3], 7).unwrap();
        assert!(!wlp_via_cache(&ci, &cache, &config).unwrap());
    }

    #[test]
    fn csv_line_matches_header_shape() {
        let cache = WlpCache::in_memory();
        let config = OracleConfig::default();
        let row = survey(&params(3, 2, 3, 5), &cache, &config, 1, false).unwrap();
        assert_eq!(
            SurveyRow::CSV_HEADER.split(',').count(),
            row.csv_line().split(',').count()
        );
        assert!(row.csv_line().starts_with("3,2,3,5,all,caption,"));
    }

    #[test]
    fn multinomial_detector_sees_both_shapes() {
        let exact = MonomialCi::new(&[2, 2, 2, 6, 8], 5).unwrap();
        assert!(detected_by_multinomial(&exact));
        let one_short = MonomialCi::new(&[2, 2, 2, 6, 7], 5).unwrap();
        assert!(detected_by_multinomial(&one_short));
        let neither = MonomialCi::new(&[2, 2, 2, 6, 6], 5).unwrap();
        assert!(!detected_by_multinomial(&neither));
    }

    #[test]
    fn square_detector_respects_the_mode() {
        let cache = WlpCache::in_memory();
        let config = OracleConfig::default();
        // Prefix (2, 3, 3) has socle degree 5 (odd): both modes agree.
        let odd = MonomialCi::new(&[2, 2, 3, 3], 7).unwrap();
        assert!(detected_by_square(&odd, SetDefs::Caption, &cache, &config).unwrap());
        assert!(detected_by_square(&odd, SetDefs::Strict, &cache, &config).unwrap());
        // Prefix (3, 3) has socle degree 4 (even): strict mode refuses.
        let even = MonomialCi::new(&[2, 3, 3], 7).unwrap();
        assert!(detected_by_square(&even, SetDefs::Caption, &cache, &config).unwrap());
        assert!(!detected_by_square(&even, SetDefs::Strict, &cache, &config).unwrap());
        // No trailing square at all.
        let none = MonomialCi::new(&[3, 3, 3], 7).unwrap();
        assert!(!detected_by_square(&none, SetDefs::Caption, &cache, &config).unwrap());
    }

    #[test]
    fn reduction_detector_finds_the_documented_example() {
        let cache = WlpCache::in_memory();
        let config = OracleConfig::default();
        let ci = MonomialCi::new(&[3, 3, 4, 16, 16], 11).unwrap();
        assert!(detected_by_reduction(&ci, &cache, &config).unwrap());
        // Small degrees leave no room for any b >= 1.
        let tight = MonomialCi::new(&[2, 3, 3], 11).unwrap();
        assert!(!detected_by_reduction(&tight, &cache, &config).unwrap());
    }
}
