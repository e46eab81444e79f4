//! Field differences and wall-time ratio of two run directories.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::diag::difference_norms;
use crate::{Error, Result};

use super::dump::read_dump;
use super::run::{snapshot_name, META_FILE};
use super::table::sci;

pub const COMPARE_HEADER: &str = "item,l1,linf,ratio";

fn read_meta(dir: &Path) -> Result<BTreeMap<String, String>> {
    let path = dir.join(META_FILE);
    let text = fs::read_to_string(&path)?;
    let mut map = BTreeMap::new();
    for line in text.lines().skip(1) {
        if let Some((k, v)) = line.split_once(',') {
            map.insert(k.to_string(), v.to_string());
        }
    }
    Ok(map)
}

fn field<'a>(meta: &'a BTreeMap<String, String>, key: &str, dir: &Path) -> Result<&'a str> {
    meta.get(key).map(String::as_str).ok_or_else(|| Error::Format {
        path: dir.join(META_FILE).display().to_string(),
        reason: format!("missing key `{key}`"),
    })
}

/// Per-snapshot `l1`/`linf` of `a - b` followed by the ratio of wall times
/// `a / b`.
pub fn compare(a: &Path, b: &Path) -> Result<String> {
    let ma = read_meta(a)?;
    let mb = read_meta(b)?;
    for key in ["example", "extents", "snapshot_times"] {
        let (va, vb) = (field(&ma, key, a)?, field(&mb, key, b)?);
        if va != vb {
            return Err(Error::InconsistentDomain(format!("runs differ in {key}: {va} vs {vb}")));
        }
    }
    let count = field(&ma, "snapshot_times", a)?.split(';').filter(|s| !s.is_empty()).count();
    let mut out = format!("{COMPARE_HEADER}\n");
    for k in 0..count {
        let name = snapshot_name(k);
        let da = read_dump(&a.join(&name))?;
        let db = read_dump(&b.join(&name))?;
        if da.extents != db.extents {
            return Err(Error::InconsistentDomain(format!("{name}: extents {:?} vs {:?}", da.extents, db.extents)));
        }
        let (l1, linf) = difference_norms(&da.values, &db.values);
        out.push_str(&format!("{},{},{},\n", name.trim_end_matches(".bin"), sci(l1, 4), sci(linf, 4)));
    }
    let wall = |m: &BTreeMap<String, String>, dir: &Path| -> Result<f64> {
        field(m, "wall_seconds", dir)?.parse::<f64>().map_err(|e| Error::Format {
            path: dir.join(META_FILE).display().to_string(),
            reason: format!("wall_seconds: {e}"),
        })
    };
    let (wa, wb) = (wall(&ma, a)?, wall(&mb, b)?);
    let ratio = if wb > 0.0 { wa / wb } else if wa == 0.0 { 1.0 } else { f64::INFINITY };
    out.push_str(&format!("wall,,,{}\n", sci(ratio, 4)));
    Ok(out)
}
