//! Group definition files, the built-in catalog, and structured result logs.
//!
//! Group file format (one file per group):
//!
//! ```text
//! # comment lines start with '#'
//! degree <n> [order <N>] [images]
//! (1,2,3)(4,5)        one generator per line, cycle notation
//! ```
//!
//! With the `images` flag the generator lines are 1-based image lists
//! instead. A stated `order` is verified against the constructed chain at
//! load time, so a wrong generator set is rejected rather than silently
//! accepted.
//!
//! Result logs are JSON Lines: one record per line, UTF-8, keys always in
//! the documented order (timestamp, group, class, algorithm, verdict,
//! value, witness, seed, iterations, worker). Type-D witnesses are stored
//! as base-image tuples (see [`crate::basecodec`]) together with the base,
//! so records re-verify without rebuilding the original chain.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::basecodec::{base_of, decode, encode, Base, EncodedElement};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::{parse_image_list, parse_perm, Permutation};
use crate::typed::{verify_witness, TypeDWitness};

/// Seed used for every catalog and file-loaded chain, so bases and class
/// names are stable across runs.
pub const LOAD_SEED: u64 = 0x6c6f_6164;

/// A parsed group definition file.
#[derive(Clone, Debug)]
pub struct GroupFile {
    pub name: String,
    pub degree: usize,
    pub expected_order: Option<BigUint>,
    pub generator_lines: Vec<String>,
    pub image_list_format: bool,
}

impl GroupFile {
    pub fn parse(text: &str, name: &str, origin: &str) -> Result<GroupFile> {
        let err = |reason: &str| Error::GroupFile {
            path: origin.to_string(),
            reason: reason.to_string(),
        };
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| err("empty file"))?;
        let mut tokens = header.split_whitespace();
        if tokens.next() != Some("degree") {
            return Err(err("header must start with 'degree <n>'"));
        }
        let degree: usize = tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| err("bad degree"))?;
        let mut expected_order = None;
        let mut image_list_format = false;
        while let Some(tok) = tokens.next() {
            match tok {
                "order" => {
                    let raw = tokens.next().ok_or_else(|| err("order flag without value"))?;
                    let parsed = BigUint::from_str(raw).map_err(|_| err("bad order value"))?;
                    expected_order = Some(parsed);
                }
                "images" => image_list_format = true,
                other => return Err(err(&format!("unknown header token {other:?}"))),
            }
        }
        let generator_lines: Vec<String> = lines.map(str::to_string).collect();
        if generator_lines.is_empty() {
            return Err(err("no generators"));
        }
        Ok(GroupFile {
            name: name.to_string(),
            degree,
            expected_order,
            generator_lines,
            image_list_format,
        })
    }

    pub fn generators(&self) -> Result<Vec<Permutation>> {
        self.generator_lines
            .iter()
            .map(|line| {
                if self.image_list_format {
                    parse_image_list(line, self.degree)
                } else {
                    parse_perm(line, self.degree)
                }
            })
            .collect()
    }

    /// Build the group, enforcing the stated order when present.
    pub fn build(&self, origin: &str) -> Result<PermGroup> {
        let group = PermGroup::from_generators(self.generators()?, LOAD_SEED)?;
        if let Some(expected) = &self.expected_order {
            if group.order() != expected {
                return Err(Error::OrderMismatch {
                    path: origin.to_string(),
                    expected: expected.to_string(),
                    got: group.order().to_string(),
                });
            }
        }
        Ok(group)
    }
}

/// Load a group from a definition file, enforcing its order checksum.
pub fn load_group(path: &Path) -> Result<PermGroup> {
    let (group, _) = load_group_with_meta(path)?;
    Ok(group)
}

pub fn load_group_with_meta(path: &Path) -> Result<(PermGroup, GroupFile)> {
    let text = fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "group".to_string());
    let display = path.display().to_string();
    let file = GroupFile::parse(&text, &name, &display)?;
    let group = file.build(&display)?;
    Ok((group, file))
}

/// Bundled generator data. Each file carries an order checksum; provenance
/// is documented in `data/README.md`.
const BUNDLED: &[(&str, &str, &str)] = &[
    ("M11", "M11.grp", include_str!("../data/M11.grp")),
    ("M12", "M12.grp", include_str!("../data/M12.grp")),
    ("M22", "M22.grp", include_str!("../data/M22.grp")),
    ("L5(2)", "L52.grp", include_str!("../data/L52.grp")),
    ("S6(2)", "S62.grp", include_str!("../data/S62.grp")),
];

pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(name, _, _)| *name).collect()
}

/// Resolve a catalog name: `S<n>` and `A<n>` (n <= 16) in natural action,
/// a bundled name (`M11`, `M12`, `M22`, `L5(2)`, `S6(2)`), a file in
/// `data_dir`, or a direct product `X×Y` (ASCII `x` also accepted).
pub fn catalog(name: &str, data_dir: Option<&Path>) -> Result<PermGroup> {
    let name = name.trim();
    if let Some(g) = catalog_single(name, data_dir)? {
        return Ok(g);
    }
    // direct products: try the unicode separator first, then each ASCII 'x'
    // split position where both sides resolve
    if let Some((left, right)) = name.split_once('×') {
        let l = catalog(left, data_dir)?;
        let r = catalog(right, data_dir)?;
        return crate::typed::direct_product(&l, &r, LOAD_SEED);
    }
    for (pos, _) in name.match_indices('x') {
        let (left, right) = (&name[..pos], &name[pos + 1..]);
        if left.is_empty() || right.is_empty() {
            continue;
        }
        if let (Ok(l), Ok(r)) = (catalog(left, data_dir), catalog(right, data_dir)) {
            return crate::typed::direct_product(&l, &r, LOAD_SEED);
        }
    }
    Err(Error::UnknownGroup {
        name: name.to_string(),
    })
}

fn catalog_single(name: &str, data_dir: Option<&Path>) -> Result<Option<PermGroup>> {
    if let Some(rest) = name.strip_prefix('S').or_else(|| name.strip_prefix('s')) {
        if let Ok(n) = rest.parse::<usize>() {
            return natural_group(n, false).map(Some);
        }
    }
    if let Some(rest) = name.strip_prefix('A').or_else(|| name.strip_prefix('a')) {
        if let Ok(n) = rest.parse::<usize>() {
            return natural_group(n, true).map(Some);
        }
    }
    for (bundled_name, file_name, text) in BUNDLED {
        if name.eq_ignore_ascii_case(bundled_name) {
            // a data-dir file of the same name overrides the bundled copy
            if let Some(dir) = data_dir {
                let candidate = dir.join(file_name);
                if candidate.is_file() {
                    return load_group(&candidate).map(Some);
                }
            }
            let file = GroupFile::parse(text, bundled_name, file_name)?;
            return file.build(file_name).map(Some);
        }
    }
    if let Some(dir) = data_dir {
        for candidate in data_dir_candidates(dir, name) {
            if candidate.is_file() {
                return load_group(&candidate).map(Some);
            }
        }
    }
    Ok(None)
}

fn data_dir_candidates(dir: &Path, name: &str) -> Vec<PathBuf> {
    let sanitized: String = name.chars().filter(|c| c.is_ascii_alphanumeric()).collect();
    vec![
        dir.join(format!("{name}.grp")),
        dir.join(format!("{sanitized}.grp")),
    ]
}

fn natural_group(n: usize, alternating: bool) -> Result<PermGroup> {
    if n == 0 || n > 16 {
        return Err(Error::UnknownGroup {
            name: format!("{}{}", if alternating { "A" } else { "S" }, n),
        });
    }
    let degree = n;
    let gens = if alternating {
        if n < 3 {
            vec![Permutation::identity(degree)]
        } else if n == 3 {
            vec![parse_perm("(1,2,3)", degree)?]
        } else {
            let long: Vec<String> = if n % 2 == 1 {
                (1..=n).map(|i| i.to_string()).collect()
            } else {
                (2..=n).map(|i| i.to_string()).collect()
            };
            vec![
                parse_perm("(1,2,3)", degree)?,
                parse_perm(&format!("({})", long.join(",")), degree)?,
            ]
        }
    } else if n == 1 {
        vec![Permutation::identity(1)]
    } else {
        let long: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        vec![
            parse_perm("(1,2)", degree)?,
            parse_perm(&format!("({})", long.join(",")), degree)?,
        ]
    };
    PermGroup::from_generators(gens, LOAD_SEED)
}

// ------------------------------------------------------------------- logs

/// One JSONL record. Field order is the wire order.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LogRecord {
    pub timestamp: String,
    pub group: String,
    pub class: String,
    /// exhaustive | random | maximal | structconst | quasireal
    pub algorithm: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessTuples>,
    pub seed: u64,
    pub iterations: u64,
    pub worker: u64,
}

/// A type-D witness as base-image tuples (1-based points).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct WitnessTuples {
    pub base: Vec<u32>,
    pub r: Vec<u32>,
    pub s: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjugator: Option<Vec<u32>>,
    pub subgroup_order: String,
}

impl WitnessTuples {
    pub fn from_witness(group: &PermGroup, w: &TypeDWitness) -> Result<WitnessTuples> {
        let base = base_of(group);
        let tup = |p: &Permutation| -> Result<Vec<u32>> {
            Ok(encode(group, &base, p)?
                .images
                .iter()
                .map(|&i| i as u32 + 1)
                .collect())
        };
        Ok(WitnessTuples {
            base: base.points.iter().map(|&p| p as u32 + 1).collect(),
            r: tup(&w.r)?,
            s: tup(&w.s)?,
            conjugator: match &w.ambient_conjugator {
                Some(x) => Some(tup(x)?),
                None => None,
            },
            subgroup_order: w.subgroup_order.to_string(),
        })
    }

    /// Decode back to permutations over `group` and re-run the full witness
    /// verification.
    pub fn decode_and_verify(&self, group: &PermGroup) -> Result<TypeDWitness> {
        let to_points = |v: &[u32]| -> Result<Vec<u16>> {
            v.iter()
                .map(|&p| {
                    if p == 0 || p as usize > group.degree() {
                        Err(Error::PointOutOfRange {
                            point: p,
                            degree: group.degree(),
                        })
                    } else {
                        Ok((p - 1) as u16)
                    }
                })
                .collect()
        };
        let base = Base {
            points: to_points(&self.base)?,
        };
        let dec = |tuple: &[u32]| -> Result<Permutation> {
            decode(
                group,
                &base,
                &EncodedElement {
                    images: to_points(tuple)?,
                },
            )
        };
        let witness = TypeDWitness {
            r: dec(&self.r)?,
            s: dec(&self.s)?,
            subgroup_order: BigUint::from_str(&self.subgroup_order).map_err(|_| {
                Error::WitnessInvalid {
                    reason: "bad subgroup order".to_string(),
                }
            })?,
            ambient_conjugator: match &self.conjugator {
                Some(t) => Some(dec(t)?),
                None => None,
            },
        };
        verify_witness(&witness, Some(group))?;
        Ok(witness)
    }
}

/// RFC 3339 timestamp. Honors `SOURCE_DATE_EPOCH` so that logging is
/// byte-reproducible when requested.
pub fn log_timestamp() -> String {
    let epoch = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.parse::<i64>().ok())
        .unwrap_or_else(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs() as i64)
                .unwrap_or(0)
        });
    format_epoch(epoch)
}

/// Civil-from-days conversion (Howard Hinnant's algorithm).
fn format_epoch(epoch: i64) -> String {
    let days = epoch.div_euclid(86_400);
    let secs = epoch.rem_euclid(86_400);
    let z = days + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36524 - doe / 146_096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = doy - (153 * mp + 2) / 5 + 1;
    let m = if mp < 10 { mp + 3 } else { mp - 9 };
    let y = if m <= 2 { y + 1 } else { y };
    format!(
        "{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z",
        y,
        m,
        d,
        secs / 3600,
        (secs / 60) % 60,
        secs % 60
    )
}

pub fn write_log(path: &Path, records: &[LogRecord]) -> Result<()> {
    let mut out = fs::File::create(path)?;
    for record in records {
        let line = serde_json::to_string(record).map_err(|e| Error::BadLogRecord {
            line: 0,
            reason: e.to_string(),
        })?;
        out.write_all(line.as_bytes())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_log(path: &Path) -> Result<Vec<LogRecord>> {
    let file = fs::File::open(path)?;
    let mut records = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: LogRecord =
            serde_json::from_str(&line).map_err(|e| Error::BadLogRecord {
                line: i + 1,
                reason: e.to_string(),
            })?;
        records.push(record);
    }
    Ok(records)
}

/// Re-verify every type-D record against the group it claims to be about.
/// Returns one result per record index carrying a witness.
pub fn verify_log(group: &PermGroup, records: &[LogRecord]) -> Vec<(usize, Result<()>)> {
    records
        .iter()
        .enumerate()
        .filter(|(_, r)| r.witness.is_some())
        .map(|(i, r)| {
            let outcome = r
                .witness
                .as_ref()
                .expect("filtered")
                .decode_and_verify(group)
                .map(|_| ());
            (i, outcome)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use std::collections::HashMap;

    #[test]
    fn bundled_groups_pass_order_checks() {
        // loading enforces expected_order; all five must build
        for name in bundled_names() {
            let g = catalog(name, None).unwrap();
            assert!(g.order().to_u64().unwrap() > 1, "{name}");
        }
    }

    #[test]
    fn bundled_orders_match_published_values() {
        let expect: HashMap<&str, u64> = [
            ("M11", 7_920),
            ("M12", 95_040),
            ("M22", 443_520),
            ("L5(2)", 9_999_360),
            ("S6(2)", 1_451_520),
        ]
        .into_iter()
        .collect();
        for (name, order) in expect {
            let g = catalog(name, None).unwrap();
            assert_eq!(g.order().to_u64().unwrap(), order, "{name}");
        }
    }

    #[test]
    fn catalog_symmetric_alternating() {
        assert_eq!(catalog("A9", None).unwrap().order().to_u64().unwrap(), 181_440);
        assert_eq!(
            catalog("S12", None).unwrap().order().to_u64().unwrap(),
            479_001_600
        );
        assert!(catalog("S17", None).is_err());
        assert!(catalog("Q8", None).is_err());
    }

    #[test]
    fn catalog_direct_products() {
        let g = catalog("A9xS3", None).unwrap();
        assert_eq!(g.degree(), 12);
        assert_eq!(g.order().to_u64().unwrap(), 1_088_640);
        let g2 = catalog("A9×S3", None).unwrap();
        assert_eq!(g2.order(), g.order());
    }

    #[test]
    fn order_mismatch_rejected() {
        let file = GroupFile::parse("degree 3 order 100\n(1,2)\n(1,2,3)\n", "bad", "test").unwrap();
        assert!(matches!(
            file.build("test"),
            Err(Error::OrderMismatch { .. })
        ));
    }

    #[test]
    fn image_list_format() {
        let file =
            GroupFile::parse("degree 3 images\n2 1 3\n2 3 1\n", "s3", "test").unwrap();
        let g = file.build("test").unwrap();
        assert_eq!(g.order().to_u64().unwrap(), 6);
    }

    #[test]
    fn timestamp_formatting() {
        assert_eq!(format_epoch(0), "1970-01-01T00:00:00Z");
        assert_eq!(format_epoch(951_827_696), "2000-02-29T12:34:56Z");
    }

    #[test]
    fn log_roundtrip() {
        let dir = std::env::temp_dir().join("classd-log-test");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("roundtrip.jsonl");
        let records: Vec<LogRecord> = (0..100)
            .map(|i| LogRecord {
                timestamp: format_epoch(i),
                group: "S4".into(),
                class: "2A".into(),
                algorithm: "random".into(),
                verdict: Some("unknown".into()),
                value: None,
                witness: None,
                seed: i as u64,
                iterations: 10,
                worker: 0,
            })
            .collect();
        write_log(&path, &records).unwrap();
        assert_eq!(read_log(&path).unwrap(), records);
        fs::write(&path, "").unwrap();
        assert!(read_log(&path).unwrap().is_empty());
    }
}
