//! LMFDB newform client: one request in flight, a minimum delay between
//! requests, raw responses cached on disk with atomic writes.

use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use adelic_core::arith::{euler_phi, gcd, mult_order};
use serde_json::Value;

use crate::error::AppError;
use crate::schema::{parse_newform, ApJson, CharacterJson, NewformJson};

pub const DEFAULT_BASE: &str = "https://www.lmfdb.org/api";
pub const MIN_DELAY: Duration = Duration::from_millis(500);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Response {
    pub status: u16,
    pub body: String,
}

pub trait Transport: Send + Sync {
    fn get(&self, url: &str) -> Result<Response, String>;
}

pub struct HttpTransport {
    agent: ureq::Agent,
}

impl Default for HttpTransport {
    fn default() -> Self {
        let agent = ureq::AgentBuilder::new().timeout(Duration::from_secs(60)).build();
        HttpTransport { agent }
    }
}

impl Transport for HttpTransport {
    fn get(&self, url: &str) -> Result<Response, String> {
        match self.agent.get(url).call() {
            Ok(r) => {
                let status = r.status();
                let body = r.into_string().map_err(|e| e.to_string())?;
                Ok(Response { status, body })
            }
            Err(ureq::Error::Status(status, r)) => Ok(Response { status, body: r.into_string().unwrap_or_default() }),
            Err(e) => Err(e.to_string()),
        }
    }
}

/// Serves canned responses and records every requested URL.
#[derive(Default)]
pub struct RecordingTransport {
    pub requests: Mutex<Vec<String>>,
    pub responses: Vec<(String, Response)>,
}

impl RecordingTransport {
    pub fn requested(&self) -> Vec<String> {
        self.requests.lock().unwrap().clone()
    }
}

impl Transport for RecordingTransport {
    fn get(&self, url: &str) -> Result<Response, String> {
        self.requests.lock().unwrap().push(url.to_string());
        self.responses
            .iter()
            .find(|(u, _)| u == url)
            .map(|(_, r)| r.clone())
            .ok_or_else(|| format!("no canned response for {url}"))
    }
}

pub struct Client {
    transport: Box<dyn Transport>,
    cache_dir: PathBuf,
    offline: bool,
    delay: Duration,
    base: String,
    last: Mutex<Option<Instant>>,
}

fn check_label(label: &str) -> Result<(), AppError> {
    let ok = !label.is_empty() && label.chars().all(|c| c.is_ascii_alphanumeric() || c == '.' || c == '-');
    if ok {
        Ok(())
    } else {
        Err(AppError::Usage(format!("invalid label {label:?}")))
    }
}

/// Write through a temporary file in the same directory, then rename.
pub fn atomic_write(path: &Path, contents: &str) -> Result<(), AppError> {
    let dir = path.parent().unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    let tmp =
        dir.join(format!(".{}.{}.tmp", path.file_name().and_then(|s| s.to_str()).unwrap_or("out"), std::process::id()));
    std::fs::write(&tmp, contents).map_err(|e| AppError::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| AppError::io(path, e))
}

impl Client {
    pub fn new(transport: Box<dyn Transport>, cache_dir: PathBuf, offline: bool) -> Self {
        Client {
            transport,
            cache_dir,
            offline,
            delay: MIN_DELAY,
            base: DEFAULT_BASE.to_string(),
            last: Mutex::new(None),
        }
    }

    /// Delays below the 500 ms floor are raised to it.
    pub fn with_delay(mut self, delay: Duration) -> Self {
        self.delay = delay.max(MIN_DELAY);
        self
    }

    pub fn with_base(mut self, base: &str) -> Self {
        self.base = base.trim_end_matches('/').to_string();
        self
    }

    pub fn cache_dir(&self) -> &Path {
        &self.cache_dir
    }

    pub fn form_path(&self, label: &str) -> PathBuf {
        self.cache_dir.join("forms").join(format!("{label}.json"))
    }

    fn raw_path(&self, table: &str, label: &str) -> PathBuf {
        self.cache_dir.join("raw").join(table).join(format!("{label}.json"))
    }

    pub fn newform_url(&self, label: &str) -> String {
        format!("{}/mf_newforms/?label={label}&_format=json", self.base)
    }

    pub fn hecke_url(&self, label: &str) -> String {
        format!("{}/mf_hecke_nf/?label={label}&_format=json", self.base)
    }

    fn request(&self, label: &str, table: &str, url: &str) -> Result<Value, AppError> {
        let raw = self.raw_path(table, label);
        let body = if raw.exists() {
            std::fs::read_to_string(&raw).map_err(|e| AppError::io(&raw, e))?
        } else {
            if self.offline {
                return Err(AppError::OfflineMiss { label: label.to_string() });
            }
            let mut last = self.last.lock().unwrap();
            if let Some(t) = *last {
                let wait = self.delay.saturating_sub(t.elapsed());
                std::thread::sleep(wait);
            }
            let resp = self.transport.get(url);
            *last = Some(Instant::now());
            drop(last);
            let resp = resp.map_err(|reason| AppError::Fetch { label: label.to_string(), status: None, reason })?;
            if resp.status != 200 {
                return Err(AppError::Fetch {
                    label: label.to_string(),
                    status: Some(resp.status),
                    reason: format!("HTTP {}", resp.status),
                });
            }
            atomic_write(&raw, &resp.body)?;
            resp.body
        };
        let v: Value = serde_json::from_str(&body).map_err(|e| AppError::Schema(format!("{table}: {e}")))?;
        let rec = v.get("data").and_then(|d| d.get(0)).cloned().ok_or_else(|| AppError::Fetch {
            label: label.to_string(),
            status: None,
            reason: format!("no {table} record for this label"),
        })?;
        Ok(rec)
    }

    /// Path of the schema-validated JSON for `label`, fetching on a cache miss.
    pub fn fetch(&self, label: &str) -> Result<PathBuf, AppError> {
        check_label(label)?;
        let path = self.form_path(label);
        if path.exists() {
            return Ok(path);
        }
        let nf = self.request(label, "mf_newforms", &self.newform_url(label))?;
        let hecke = self.request(label, "mf_hecke_nf", &self.hecke_url(label))?;
        let json = convert_lmfdb(&nf, &hecke)?;
        let text = serde_json::to_string_pretty(&json).map_err(|e| AppError::Schema(e.to_string()))?;
        parse_newform(&text)?;
        atomic_write(&path, &(text + "\n"))?;
        Ok(path)
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, AppError> {
    v.get(key).ok_or_else(|| AppError::Schema(format!("LMFDB record lacks {key}")))
}

fn as_u64(v: &Value, key: &str) -> Result<u64, AppError> {
    field(v, key)?.as_u64().ok_or_else(|| AppError::Schema(format!("{key} is not an integer")))
}

fn int_list(v: &Value) -> Result<Vec<i64>, AppError> {
    v.as_array()
        .and_then(|a| a.iter().map(Value::as_i64).collect::<Option<Vec<_>>>())
        .ok_or_else(|| AppError::Schema("expected a list of integers".into()))
}

/// Character table from `[N, n, gens, exps]` with `χ(gens[i]) = ζ_n^{exps[i]}`.
fn char_table(cv: &Value) -> Result<CharacterJson, AppError> {
    let a = cv
        .as_array()
        .filter(|a| a.len() == 4)
        .ok_or_else(|| AppError::Schema("char_values must have 4 entries".into()))?;
    let n = a[0].as_u64().ok_or_else(|| AppError::Schema("bad char modulus".into()))?;
    let order = a[1].as_u64().ok_or_else(|| AppError::Schema("bad char order".into()))?;
    let gens: Vec<u64> = int_list(&a[2])?.into_iter().map(|x| x as u64).collect();
    let exps: Vec<u64> = int_list(&a[3])?.into_iter().map(|x| x as u64).collect();
    if gens.len() != exps.len() {
        return Err(AppError::Schema("char_values generator/exponent mismatch".into()));
    }
    if n == 1 {
        return Ok(CharacterJson { modulus: 1, order: 1, exps: vec![(0, 0)], zeta: None });
    }
    let phi = euler_phi(n);
    let orders: Vec<u64> = gens.iter().map(|&g| mult_order(g % n, n, phi)).collect();
    let mut table = std::collections::BTreeMap::new();
    let mut idx = vec![0u64; gens.len()];
    loop {
        let mut u = 1u64;
        let mut e = 0u64;
        for (i, &k) in idx.iter().enumerate() {
            for _ in 0..k {
                u = u * gens[i] % n;
            }
            e = (e + k * exps[i]) % order.max(1);
        }
        table.insert(u, e);
        let mut i = 0;
        loop {
            if i == idx.len() {
                if table.len() as u64 != phi {
                    return Err(AppError::Schema("char_values generators do not span the unit group".into()));
                }
                return Ok(CharacterJson { modulus: n, order, exps: table.into_iter().collect(), zeta: None });
            }
            idx[i] += 1;
            if idx[i] < orders[i] {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Map LMFDB `mf_newforms` and `mf_hecke_nf` records to the local schema.
/// Only power-basis coefficient data is accepted; `ζ_n` is recovered from
/// the listed character values when the order exceeds 2.
pub fn convert_lmfdb(nf: &Value, hecke: &Value) -> Result<NewformJson, AppError> {
    let label = field(nf, "label")?.as_str().unwrap_or_default().to_string();
    let level = as_u64(nf, "level")?;
    let weight = as_u64(nf, "weight")? as u32;
    let power_basis = hecke.get("hecke_ring_power_basis").and_then(Value::as_bool).unwrap_or(false);
    if !power_basis {
        return Err(AppError::NotPowerBasis);
    }
    let field_poly = int_list(field(hecke, "field_poly")?)?;
    let degree = field_poly.len() - 1;
    let mut ch = char_table(field(nf, "char_values")?)?;
    if ch.order > 2 {
        let cv = field(hecke, "hecke_ring_character_values")?
            .as_array()
            .ok_or_else(|| AppError::Schema("hecke_ring_character_values must be a list".into()))?;
        // ζ from a generator whose exponent is a unit modulo the order
        let exps: std::collections::HashMap<u64, u64> = ch.exps.iter().copied().collect();
        let mut zeta = None;
        for pair in cv {
            let g = pair.get(0).and_then(Value::as_u64).unwrap_or(0) % ch.modulus;
            let e = exps.get(&g).copied().unwrap_or(0);
            if gcd(e, ch.order) == 1 {
                let coords = int_list(pair.get(1).unwrap_or(&Value::Null))?;
                zeta = Some((coords, inverse_exponent(e, ch.order)));
                break;
            }
        }
        let (coords, k) = zeta.ok_or_else(|| AppError::Schema("cannot recover zeta from character values".into()))?;
        let k_field = adelic_core::numberfields::NumberFieldQ::from_i64(&field_poly).map_err(AppError::math)?;
        let val = k_field
            .element(coords.iter().map(|&c| adelic_core::numberfields::rat(c)).collect())
            .map_err(AppError::math)?;
        let z = k_field.pow(&val, k);
        ch.zeta = Some(z.coords().iter().map(|c| c.to_string()).collect());
    }
    let ap_lists = field(hecke, "ap")?.as_array().ok_or_else(|| AppError::Schema("ap must be a list".into()))?;
    let mut top = 64;
    while adelic_core::arith::primes_up_to(top).len() < ap_lists.len() {
        top *= 2;
    }
    let primes = adelic_core::arith::primes_up_to(top);
    let mut ap = Vec::new();
    for (l, v) in primes.into_iter().zip(ap_lists) {
        let coords = int_list(v)?;
        if coords.len() != degree {
            return Err(AppError::Schema(format!("a_{l} has {} coordinates, expected {degree}", coords.len())));
        }
        ap.push(ApJson { l, coords: coords.iter().map(|c| c.to_string()).collect() });
    }
    let cm_disc = nf.get("cm_discs").and_then(Value::as_array).and_then(|a| a.first()).and_then(Value::as_i64);
    Ok(NewformJson {
        label,
        level,
        weight,
        char: ch,
        field_poly,
        power_basis,
        ap,
        inner_twists: None,
        automorphisms: None,
        cm_disc,
    })
}

fn inverse_exponent(e: u64, n: u64) -> u64 {
    (1..=n).find(|k| (k * e) % n == 1 % n).unwrap_or(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn char_table_from_generators() {
        let c = char_table(&json!([13, 6, [2], [1]])).unwrap();
        assert_eq!(c.exps.len(), 12);
        assert!(c.exps.contains(&(4, 2)));
        assert!(char_table(&json!([13, 6, [3], [1]])).is_err());
    }
}
