//! Weight-2 newform eigenvalue data: retrieval from the LMFDB API, an on-disk
//! JSON cache, bundled offline fixtures, and exact norms from the eigenvalue
//! field.
//!
//! Cache documents keep every integer as a decimal string:
//!
//! ```text
//! {level, weight, fetched_at,
//!  records: [{label, degree, field_poly: ["c0", ...], is_cm, cm_disc,
//!             eigen: {"q": ["x0", ...]}}]}
//! ```
//!
//! Eigenvalues are stored in the power basis of the field generator.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::Duration;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::arith;
use crate::poly::{resultant_z, Poly};

pub const DEFAULT_LMFDB_URL: &str = "https://www.lmfdb.org/api";
pub const DEFAULT_Q_MAX: u64 = 200;
pub const LMFDB_URL_ENV: &str = "FERMAT3_LMFDB_URL";

const EXCERPT_LEN: usize = 240;

#[derive(Debug, Error)]
pub enum NewformError {
    #[error("no data source for level {level}, weight {weight}: {reason}")]
    NoDataSource { level: u64, weight: u64, reason: String },
    #[error("unparseable upstream record ({reason}): {excerpt}")]
    Unparseable { reason: String, excerpt: String },
    #[error("invalid record {label}: {reason}")]
    InvalidRecord { label: String, reason: String },
    #[error("coordinate length {got} does not match field degree {expected}")]
    CoordinateLength { expected: usize, got: usize },
    #[error("cache I/O on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

fn unparseable(reason: impl Into<String>, payload: &str) -> NewformError {
    let excerpt: String = payload.chars().take(EXCERPT_LEN).collect();
    NewformError::Unparseable { reason: reason.into(), excerpt }
}

/// One Galois orbit of newforms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewformRecord {
    pub label: String,
    pub level: u64,
    pub weight: u64,
    pub degree: usize,
    /// Monic defining polynomial of the eigenvalue field, low degree first.
    pub field_poly: Vec<BigInt>,
    /// a_q(f) in the power basis, keyed by prime q.
    pub eigen: BTreeMap<u64, Vec<BigInt>>,
    pub is_cm: bool,
    pub cm_disc: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewformCache {
    pub level: u64,
    pub weight: u64,
    pub fetched_at: String,
    pub records: Vec<NewformRecord>,
}

impl NewformRecord {
    pub fn aq(&self, q: u64) -> Option<&[BigInt]> {
        self.eigen.get(&q).map(Vec::as_slice)
    }

    /// The defining polynomial as a [`Poly`].
    pub fn field(&self) -> Poly {
        Poly::new(self.field_poly.clone())
    }

    /// The integer a_q(f) of a rational orbit.
    pub fn rational_aq(&self, q: u64) -> Option<&BigInt> {
        (self.degree == 1).then(|| self.aq(q).map(|c| &c[0])).flatten()
    }

    /// Check monicity, coordinate lengths, low-degree irreducibility and the
    /// Ramanujan bound at primes not dividing the level.
    pub fn validate(&self) -> Result<(), NewformError> {
        let bad = |reason: String| NewformError::InvalidRecord { label: self.label.clone(), reason };
        let f = self.field();
        if f.degree() != Some(self.degree) || !f.is_monic() {
            return Err(bad(format!("field_poly is not monic of degree {}", self.degree)));
        }
        if self.degree == 2 && !f.rational_roots().is_empty() {
            return Err(bad("quadratic field_poly is reducible".into()));
        }
        for (q, c) in &self.eigen {
            if c.len() != self.degree {
                return Err(bad(format!("a_{q} has {} coordinates", c.len())));
            }
        }
        let roots = complex_roots(&f);
        for (&q, c) in &self.eigen {
            if self.level % q == 0 {
                continue;
            }
            let bound = 2.0 * (q as f64).sqrt() + 1e-6;
            for z in &roots {
                let v = eval_complex(c, *z);
                if v.norm() > bound {
                    return Err(bad(format!("|a_{q}| = {:.6} > 2√{q} in an embedding", v.norm())));
                }
            }
        }
        Ok(())
    }
}

fn complex_roots(f: &Poly) -> Vec<nalgebra::Complex<f64>> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    let lead = f.lead().to_f64().unwrap_or(1.0);
    let companion = DMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -f.coeff(i).to_f64().unwrap_or(f64::NAN) / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    companion.complex_eigenvalues().iter().copied().collect()
}

fn eval_complex(c: &[BigInt], z: nalgebra::Complex<f64>) -> nalgebra::Complex<f64> {
    c.iter()
        .rev()
        .fold(nalgebra::Complex::new(0.0, 0.0), |acc, k| acc * z + k.to_f64().unwrap_or(f64::NAN))
}

/// Norm to Q of the element with power-basis coordinates `elem`, as
/// `Res(field_poly, elem(x))`.
pub fn eigenvalue_norm(rec: &NewformRecord, elem: &[BigInt]) -> Result<BigInt, NewformError> {
    if elem.len() != rec.degree {
        return Err(NewformError::CoordinateLength { expected: rec.degree, got: elem.len() });
    }
    let g = Poly::new(elem.to_vec());
    if g.is_zero() {
        return Ok(BigInt::zero());
    }
    if rec.degree == 1 {
        return Ok(elem[0].clone());
    }
    Ok(resultant_z(&rec.field(), &g))
}

/// Product of two elements of the eigenvalue field, reduced modulo the
/// defining polynomial.
pub fn field_mul(rec: &NewformRecord, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
    let prod = &Poly::new(x.to_vec()) * &Poly::new(y.to_vec());
    let r = prod.rem_monic(&rec.field());
    (0..rec.degree).map(|i| r.coeff(i)).collect()
}

/// LMFDB ordering of orbit labels: base-26 letter codes compare by length first.
fn label_key(label: &str) -> (Vec<u64>, usize, String) {
    let mut nums = Vec::new();
    let mut tail = String::new();
    for part in label.split('.') {
        match part.parse::<u64>() {
            Ok(n) if tail.is_empty() => nums.push(n),
            _ => {
                if !tail.is_empty() {
                    tail.push('.');
                }
                tail.push_str(part);
            }
        }
    }
    (nums, tail.len(), tail)
}

impl NewformCache {
    pub fn sort(&mut self) {
        self.records.sort_by_cached_key(|r| label_key(&r.label));
    }

    pub fn get(&self, label: &str) -> Option<&NewformRecord> {
        self.records.iter().find(|r| r.label == label)
    }

    pub fn validate(&self) -> Result<(), NewformError> {
        let mut seen = BTreeSet::new();
        for r in &self.records {
            if !seen.insert(&r.label) {
                return Err(NewformError::InvalidRecord { label: r.label.clone(), reason: "duplicate label".into() });
            }
            r.validate()?;
        }
        let mut sorted = self.records.clone();
        sorted.sort_by_cached_key(|r| label_key(&r.label));
        if sorted != self.records {
            return Err(NewformError::InvalidRecord { label: String::new(), reason: "records not sorted by label".into() });
        }
        Ok(())
    }

    /// Largest prime with stored eigenvalues in every record.
    pub fn q_coverage(&self) -> Option<u64> {
        self.records.iter().map(|r| r.eigen.keys().next_back().copied().unwrap_or(0)).min()
    }

    /// Drop eigenvalues above `q_max`.
    pub fn truncate(&mut self, q_max: u64) {
        for r in &mut self.records {
            r.eigen.retain(|&q, _| q <= q_max);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&RawCache::from(self)).expect("cache serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, NewformError> {
        let raw: RawCache = serde_json::from_str(text).map_err(|e| unparseable(e.to_string(), text))?;
        let cache = raw.into_cache().map_err(|reason| unparseable(reason, text))?;
        cache.validate()?;
        Ok(cache)
    }
}

#[derive(Serialize, Deserialize)]
struct RawRecord {
    label: String,
    degree: usize,
    field_poly: Vec<String>,
    is_cm: bool,
    cm_disc: String,
    eigen: BTreeMap<String, Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct RawCache {
    level: u64,
    weight: u64,
    fetched_at: String,
    records: Vec<RawRecord>,
}

fn ints(v: &[String]) -> Result<Vec<BigInt>, String> {
    v.iter().map(|s| s.parse::<BigInt>().map_err(|_| format!("bad integer {s:?}"))).collect()
}

impl From<&NewformCache> for RawCache {
    fn from(c: &NewformCache) -> Self {
        let strs = |v: &[BigInt]| v.iter().map(BigInt::to_string).collect::<Vec<_>>();
        RawCache {
            level: c.level,
            weight: c.weight,
            fetched_at: c.fetched_at.clone(),
            records: c
                .records
                .iter()
                .map(|r| RawRecord {
                    label: r.label.clone(),
                    degree: r.degree,
                    field_poly: strs(&r.field_poly),
                    is_cm: r.is_cm,
                    cm_disc: r.cm_disc.to_string(),
                    eigen: r.eigen.iter().map(|(q, c)| (q.to_string(), strs(c))).collect(),
                })
                .collect(),
        }
    }
}

impl RawCache {
    fn into_cache(self) -> Result<NewformCache, String> {
        let (level, weight) = (self.level, self.weight);
        let records = self
            .records
            .into_iter()
            .map(|r| {
                let eigen = r
                    .eigen
                    .iter()
                    .map(|(q, c)| Ok((q.parse::<u64>().map_err(|_| format!("bad prime key {q:?}"))?, ints(c)?)))
                    .collect::<Result<_, String>>()?;
                Ok(NewformRecord {
                    label: r.label,
                    level,
                    weight,
                    degree: r.degree,
                    field_poly: ints(&r.field_poly)?,
                    eigen,
                    is_cm: r.is_cm,
                    cm_disc: r.cm_disc.parse().map_err(|_| format!("bad cm_disc {:?}", r.cm_disc))?,
                })
            })
            .collect::<Result<_, String>>()?;
        Ok(NewformCache { level, weight, fetched_at: self.fetched_at, records })
    }
}

/// Fixtures shipped with the crate for offline runs.
pub fn bundled_fixture(level: u64, weight: u64) -> Option<&'static str> {
    match (level, weight) {
        (972, 2) => Some(include_str!("../data/newforms_972_2.json")),
        (11, 2) => Some(include_str!("../data/newforms_11_2.json")),
        (1, 2) => Some(include_str!("../data/newforms_1_2.json")),
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub struct FetchConfig {
    pub q_max: u64,
    pub cache_dir: PathBuf,
    pub offline: bool,
    pub base_url: String,
    pub page_size: usize,
    pub attempts: u32,
    pub backoff: Duration,
    pub timeout: Duration,
}

impl Default for FetchConfig {
    fn default() -> Self {
        FetchConfig {
            q_max: DEFAULT_Q_MAX,
            cache_dir: PathBuf::from("data"),
            offline: false,
            base_url: std::env::var(LMFDB_URL_ENV).unwrap_or_else(|_| DEFAULT_LMFDB_URL.to_string()),
            page_size: 100,
            attempts: 3,
            backoff: Duration::from_millis(500),
            timeout: Duration::from_secs(30),
        }
    }
}

pub fn cache_path(dir: &Path, level: u64, weight: u64) -> PathBuf {
    dir.join(format!("newforms_{level}_{weight}.json"))
}

/// All newform orbits of the given level and weight with a_q for q ≤ `q_max`,
/// using the default configuration.
pub fn fetch(level: u64, weight: u64, q_max: u64) -> Result<NewformCache, NewformError> {
    fetch_with(level, weight, &FetchConfig { q_max, ..FetchConfig::default() })
}

/// Lookup order: cache directory, then LMFDB (unless offline, writing the
/// cache on success), then the bundled fixture.
pub fn fetch_with(level: u64, weight: u64, cfg: &FetchConfig) -> Result<NewformCache, NewformError> {
    let path = cache_path(&cfg.cache_dir, level, weight);
    if let Ok(text) = std::fs::read_to_string(&path) {
        let cache = NewformCache::from_json(&text)?;
        if cache.q_coverage().is_none_or(|c| c >= arith::primes_in(2, cfg.q_max).last().copied().unwrap_or(0)) {
            log::info!("newforms {level}.{weight}: using cache {}", path.display());
            return Ok(finish(cache, cfg.q_max));
        }
        log::warn!("cache {} does not reach q = {}; refetching", path.display(), cfg.q_max);
    }
    let mut network_err = None;
    if !cfg.offline {
        match fetch_online(level, weight, cfg) {
            Ok(cache) => {
                if let Err(e) = write_cache(&path, &cache) {
                    log::warn!("{e}");
                }
                return Ok(finish(cache, cfg.q_max));
            }
            Err(e @ NewformError::Unparseable { .. }) | Err(e @ NewformError::InvalidRecord { .. }) => {
                return Err(e)
            }
            Err(e) => {
                log::warn!("LMFDB fetch failed: {e}");
                network_err = Some(e.to_string());
            }
        }
    }
    if let Some(text) = bundled_fixture(level, weight) {
        log::info!("newforms {level}.{weight}: using bundled fixture");
        let cache = NewformCache::from_json(text)?;
        if let Some(c) = cache.q_coverage() {
            if c < cfg.q_max && cfg.q_max <= DEFAULT_Q_MAX {
                log::warn!("bundled fixture covers q ≤ {c} only");
            }
        }
        return Ok(finish(cache, cfg.q_max));
    }
    Err(NewformError::NoDataSource {
        level,
        weight,
        reason: network_err.unwrap_or_else(|| "offline and no cached or bundled data".into()),
    })
}

fn finish(mut cache: NewformCache, q_max: u64) -> NewformCache {
    cache.truncate(q_max);
    cache
}

fn write_cache(path: &Path, cache: &NewformCache) -> Result<(), NewformError> {
    let io = |source| NewformError::Io { path: path.to_path_buf(), source };
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, cache.to_json() + "\n").map_err(io)
}

struct Client {
    agent: ureq::Agent,
    cfg: FetchConfig,
}

impl Client {
    fn new(cfg: &FetchConfig) -> Self {
        let config = ureq::Agent::config_builder().timeout_global(Some(cfg.timeout)).build();
        Client { agent: ureq::Agent::new_with_config(config), cfg: cfg.clone() }
    }

    fn get(&self, url: &str) -> Result<Value, NewformError> {
        let mut last = String::new();
        for attempt in 0..self.cfg.attempts.max(1) {
            if attempt > 0 {
                std::thread::sleep(self.cfg.backoff * 2u32.pow(attempt - 1));
            }
            log::debug!("GET {url} (attempt {})", attempt + 1);
            match self.agent.get(url).call() {
                Ok(mut resp) => {
                    let text = resp.body_mut().read_to_string().map_err(|e| NewformError::NoDataSource {
                        level: 0,
                        weight: 0,
                        reason: e.to_string(),
                    })?;
                    return serde_json::from_str(&text).map_err(|e| unparseable(e.to_string(), &text));
                }
                Err(e) => last = e.to_string(),
            }
        }
        Err(NewformError::NoDataSource { level: 0, weight: 0, reason: format!("{url}: {last}") })
    }

    /// All `data` rows of a paged collection query.
    fn query(&self, collection: &str, params: &str) -> Result<Vec<Value>, NewformError> {
        let base = self.cfg.base_url.trim_end_matches('/');
        let mut rows = Vec::new();
        let mut offset = 0;
        loop {
            let url = format!(
                "{base}/{collection}/?{params}&_format=json&_limit={}&_offset={offset}",
                self.cfg.page_size
            );
            let doc = self.get(&url)?;
            let page = doc
                .get("data")
                .and_then(Value::as_array)
                .ok_or_else(|| unparseable("missing data array", &doc.to_string()))?;
            rows.extend(page.iter().cloned());
            let more = doc.get("next").is_some_and(|n| !n.is_null());
            if page.len() < self.cfg.page_size && !more || page.is_empty() {
                break;
            }
            offset += page.len();
        }
        Ok(rows)
    }
}

fn fetch_online(level: u64, weight: u64, cfg: &FetchConfig) -> Result<NewformCache, NewformError> {
    let client = Client::new(cfg);
    let rows = client
        .query(
            "mf_newforms",
            &format!("level={level}&weight={weight}&char_order=1&_fields=label,dim,is_cm,cm_discs,traces"),
        )
        .map_err(|e| with_level(e, level, weight))?;
    let primes = arith::primes_in(2, cfg.q_max);
    let mut records = Vec::new();
    for row in rows {
        let text = row.to_string();
        let label = row["label"].as_str().ok_or_else(|| unparseable("label", &text))?.to_string();
        let dim = row["dim"].as_u64().ok_or_else(|| unparseable("dim", &text))? as usize;
        let is_cm = row["is_cm"].as_bool().ok_or_else(|| unparseable("is_cm", &text))?;
        let cm_disc = row["cm_discs"].as_array().and_then(|d| d.first()).and_then(Value::as_i64).unwrap_or(0);
        let (field_poly, eigen) = if dim == 1 {
            let traces = row["traces"].as_array().ok_or_else(|| unparseable("traces", &text))?;
            let mut eigen = BTreeMap::new();
            for &q in &primes {
                let t = traces
                    .get(q as usize - 1)
                    .ok_or_else(|| unparseable(format!("traces stop before a_{q}"), &text))?;
                eigen.insert(q, vec![json_int(t).ok_or_else(|| unparseable("trace", &text))?]);
            }
            (vec![BigInt::zero(), BigInt::one()], eigen)
        } else {
            hecke_eigenvalues(&client, &label, dim, &primes)?
        };
        records.push(NewformRecord { label, level, weight, degree: dim, field_poly, eigen, is_cm, cm_disc });
    }
    let fetched_at = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let mut cache = NewformCache { level, weight, fetched_at, records };
    cache.sort();
    cache.validate()?;
    Ok(cache)
}

fn with_level(e: NewformError, level: u64, weight: u64) -> NewformError {
    match e {
        NewformError::NoDataSource { reason, .. } => NewformError::NoDataSource { level, weight, reason },
        e => e,
    }
}

fn json_int(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).or_else(|| n.to_string().parse().ok()),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

fn json_ints(v: &Value) -> Option<Vec<BigInt>> {
    v.as_array()?.iter().map(json_int).collect()
}

/// Eigenvalues of a non-rational orbit, converted from the Hecke-ring basis
/// `β_i = numerators[i](ν) / denominators[i]` to the power basis in ν.
fn hecke_eigenvalues(
    client: &Client,
    label: &str,
    dim: usize,
    primes: &[u64],
) -> Result<(Vec<BigInt>, BTreeMap<u64, Vec<BigInt>>), NewformError> {
    let rows = client.query(
        "mf_hecke_nf",
        &format!("label={label}&_fields=label,field_poly,hecke_ring_numerators,hecke_ring_denominators,ap"),
    )?;
    let row = rows.first().ok_or_else(|| unparseable(format!("no mf_hecke_nf row for {label}"), ""))?;
    let text = row.to_string();
    let field_poly = json_ints(&row["field_poly"]).ok_or_else(|| unparseable("field_poly", &text))?;
    let numers: Vec<Vec<BigInt>> = row["hecke_ring_numerators"]
        .as_array()
        .and_then(|a| a.iter().map(json_ints).collect())
        .ok_or_else(|| unparseable("hecke_ring_numerators", &text))?;
    let denoms = json_ints(&row["hecke_ring_denominators"]).ok_or_else(|| unparseable("hecke_ring_denominators", &text))?;
    let ap = row["ap"].as_array().ok_or_else(|| unparseable("ap", &text))?;
    if field_poly.len() != dim + 1 || numers.len() != dim || denoms.len() != dim {
        return Err(unparseable(format!("Hecke ring data inconsistent with dimension {dim}"), &text));
    }
    let mut eigen = BTreeMap::new();
    for (i, &q) in primes.iter().enumerate() {
        let coords = ap
            .get(i)
            .and_then(json_ints)
            .ok_or_else(|| unparseable(format!("ap stops before a_{q}"), &text))?;
        if coords.len() != dim {
            return Err(unparseable(format!("a_{q} has {} coordinates", coords.len()), &text));
        }
        let mut power = vec![BigRational::zero(); dim];
        for (c, (num, den)) in coords.iter().zip(numers.iter().zip(&denoms)) {
            for (k, n) in num.iter().enumerate() {
                power[k] += BigRational::new(c * n, den.clone());
            }
        }
        let power = power
            .into_iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| unparseable(format!("a_{q} is not integral in the power basis"), &text))?;
        eigen.insert(q, power);
    }
    Ok((field_poly, eigen))
}

/// Number of points over F_2 on the curve `y² + a1xy + a3y = x³ + a2x² + a4x + a6`.
pub fn count_points_f2(a: [i64; 5]) -> u64 {
    let [a1, a2, a3, a4, a6] = a.map(|c| c.rem_euclid(2));
    let mut n = 1;
    for x in 0..2i64 {
        for y in 0..2i64 {
            if (y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x - a6).rem_euclid(2) == 0 {
                n += 1;
            }
        }
    }
    n
}

impl std::fmt::Display for NewformRecord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let poly = self.field_poly.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{} dim={} field=[{poly}]", self.label, self.degree)?;
        if self.is_cm {
            write!(f, " cm={}", self.cm_disc)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::{BufRead, BufReader, Write};
    use std::net::TcpListener;

    fn offline(q_max: u64) -> FetchConfig {
        let dir = std::env::temp_dir().join("fermat3-no-cache");
        FetchConfig { q_max, cache_dir: dir, offline: true, ..FetchConfig::default() }
    }

    fn rec(field: &[i64]) -> NewformRecord {
        NewformRecord {
            label: "t".into(),
            level: 1,
            weight: 2,
            degree: field.len() - 1,
            field_poly: field.iter().map(|&c| BigInt::from(c)).collect(),
            eigen: BTreeMap::new(),
            is_cm: false,
            cm_disc: 0,
        }
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn norms() {
        assert_eq!(eigenvalue_norm(&rec(&[0, 1]), &big(&[-6])).unwrap(), BigInt::from(-6));
        assert_eq!(eigenvalue_norm(&rec(&[-2, 0, 1]), &big(&[-1, 1])).unwrap(), BigInt::from(-1));
        assert_eq!(eigenvalue_norm(&rec(&[-1, -3, 0, 1]), &big(&[0, 0, 0])).unwrap(), BigInt::zero());
        assert!(matches!(
            eigenvalue_norm(&rec(&[-2, 0, 1]), &big(&[1])),
            Err(NewformError::CoordinateLength { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn level_972_fixture() {
        let cache = fetch_with(972, 2, &offline(200)).unwrap();
        assert_eq!(cache.records.len(), 7);
        let cm: Vec<_> = cache.records.iter().filter(|r| r.is_cm).collect();
        assert_eq!(cm.len(), 4);
        assert!(cm.iter().all(|r| r.degree == 1 && r.cm_disc == -3));
        assert_eq!(cache.records.iter().filter(|r| r.degree > 1).count(), 3);
        for r in &cm {
            for (&q, c) in &r.eigen {
                if q % 3 == 2 {
                    assert!(c[0].is_zero(), "{} a_{q}", r.label);
                }
            }
        }
        cache.validate().unwrap();
        assert_eq!(cache.q_coverage(), Some(199));
    }

    #[test]
    fn level_11_and_1() {
        let cache = fetch_with(11, 2, &offline(200)).unwrap();
        assert_eq!(cache.records.len(), 1);
        let a2 = cache.records[0].rational_aq(2).unwrap().clone();
        let n = count_points_f2([0, -1, 1, -10, -20]);
        assert_eq!(n, 5);
        assert_eq!(a2, BigInt::from(3 - n as i64));
        assert!(fetch_with(1, 2, &offline(200)).unwrap().records.is_empty());
        assert!(matches!(fetch_with(37, 2, &offline(200)), Err(NewformError::NoDataSource { .. })));
    }

    #[test]
    fn round_trip_and_truncation() {
        let cache = NewformCache::from_json(bundled_fixture(972, 2).unwrap()).unwrap();
        assert_eq!(NewformCache::from_json(&cache.to_json()).unwrap(), cache);
        let small = fetch_with(972, 2, &offline(13)).unwrap();
        assert_eq!(small.records[4].eigen.keys().copied().collect::<Vec<_>>(), vec![2, 3, 5, 7, 11, 13]);
    }

    #[test]
    fn cache_dir_is_read_first() {
        let dir = tempfile::tempdir().unwrap();
        let mut cache = NewformCache::from_json(bundled_fixture(11, 2).unwrap()).unwrap();
        cache.fetched_at = "cached".into();
        write_cache(&cache_path(dir.path(), 11, 2), &cache).unwrap();
        let cfg = FetchConfig { cache_dir: dir.path().into(), ..offline(200) };
        assert_eq!(fetch_with(11, 2, &cfg).unwrap().fetched_at, "cached");
    }

    #[test]
    fn schema_drift_is_reported() {
        let err = NewformCache::from_json(r#"{"level": 11, "weight": 2, "records": 5}"#).unwrap_err();
        match err {
            NewformError::Unparseable { excerpt, .. } => assert!(excerpt.contains("records")),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn ramanujan_violation_rejected() {
        let mut r = rec(&[-2, 0, 1]);
        r.level = 972;
        r.eigen.insert(5, big(&[0, 3]));
        r.validate().unwrap();
        r.eigen.insert(5, big(&[0, 4]));
        assert!(r.validate().is_err());
        assert!(rec(&[-4, 0, 1]).validate().is_err());
    }

    #[test]
    fn label_order() {
        let mut labels = vec!["972.2.a.ba", "972.2.a.z", "972.2.a.b", "97.2.a.a"];
        labels.sort_by_key(|l| label_key(l));
        assert_eq!(labels, vec!["97.2.a.a", "972.2.a.b", "972.2.a.z", "972.2.a.ba"]);
    }

    /// Serve canned JSON bodies keyed by collection name.
    fn mock_server(bodies: Vec<(&'static str, String)>, requests: usize) -> String {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        std::thread::spawn(move || {
            for stream in listener.incoming().take(requests) {
                let mut stream = stream.unwrap();
                let mut line = String::new();
                BufReader::new(&stream).read_line(&mut line).unwrap();
                let body = bodies
                    .iter()
                    .find(|(k, _)| line.contains(k))
                    .map(|(_, b)| b.clone())
                    .unwrap_or_else(|| "{}".into());
                let _ = write!(
                    stream,
                    "HTTP/1.1 200 OK\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                    body.len()
                );
            }
        });
        format!("http://{addr}")
    }

    #[test]
    fn online_fetch_against_mock() {
        let traces: Vec<i64> = (1..=30).map(|n| if n == 2 { -2 } else { 0 }).collect();
        let newforms = serde_json::json!({
            "data": [
                {"label": "50.2.a.b", "dim": 2, "is_cm": false, "cm_discs": [], "traces": []},
                {"label": "50.2.a.a", "dim": 1, "is_cm": false, "cm_discs": [], "traces": traces},
            ],
            "next": null
        });
        // Hecke basis (1, 2 + ν) over ν² − 2
        let hecke = serde_json::json!({
            "data": [{
                "label": "50.2.a.b",
                "field_poly": [-2, 0, 1],
                "hecke_ring_numerators": [[1, 0], [2, 1]],
                "hecke_ring_denominators": [1, 1],
                "ap": [[0, 1], [1, 0], [0, 0], [2, 0], [0, 1], [0, 0], [-2, 1], [0, 0], [0, 0], [0, 0]]
            }],
            "next": null
        });
        let url = mock_server(vec![("mf_newforms", newforms.to_string()), ("mf_hecke_nf", hecke.to_string())], 2);
        let dir = tempfile::tempdir().unwrap();
        let cfg = FetchConfig {
            q_max: 29,
            cache_dir: dir.path().into(),
            offline: false,
            base_url: url,
            attempts: 1,
            ..FetchConfig::default()
        };
        let cache = fetch_with(50, 2, &cfg).unwrap();
        assert_eq!(cache.records[0].label, "50.2.a.a");
        assert_eq!(cache.records[0].rational_aq(2), Some(&BigInt::from(-2)));
        let b = &cache.records[1];
        assert_eq!(b.aq(2).unwrap(), big(&[2, 1]).as_slice());
        assert_eq!(b.aq(11).unwrap(), big(&[2, 1]).as_slice());
        assert_eq!(b.aq(17).unwrap(), big(&[0, 1]).as_slice());
        // written to the cache directory
        assert!(cache_path(dir.path(), 50, 2).exists());
    }

    #[test]
    fn unreachable_host_falls_back() {
        let cfg = FetchConfig {
            cache_dir: tempfile::tempdir().unwrap().path().into(),
            base_url: "http://127.0.0.1:9".into(),
            attempts: 1,
            ..FetchConfig::default()
        };
        assert_eq!(fetch_with(11, 2, &cfg).unwrap().records.len(), 1);
        assert!(matches!(fetch_with(37, 2, &cfg), Err(NewformError::NoDataSource { .. })));
    }
}
