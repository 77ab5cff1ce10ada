use std::io::Write;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;

/// One CSV/JSON record.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub algo: String,
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub mu: usize,
    pub delta: usize,
    pub phase: String,
    pub millis: f64,
    pub verified: bool,
    pub generic: bool,
}

pub fn millis(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

pub fn write_csv(path: &Path, rows: &[Row]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()
}

pub fn csv_string(rows: &[Row]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("ascii")
}

pub fn write_json(path: &Path, rows: &[Row]) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut f, rows)?;
    writeln!(f)
}

/// FNV-1a over the little-endian coefficient words.
pub fn digest(coeffs: &[u64]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for c in coeffs {
        for b in c.to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    format!("{h:016x}")
}

/// Least-squares slope of `log millis` against `log n`.
pub fn loglog_slope(points: &[(usize, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.1 > 0.0)
        .map(|&(n, t)| ((n as f64).ln(), t.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / k, sy / k);
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(algo: &str) -> Row {
        Row {
            algo: algo.into(),
            n: 16,
            m: 2,
            d: 8,
            mu: 2,
            delta: 8,
            phase: "total".into(),
            millis: 1.5,
            verified: true,
            generic: true,
        }
    }

    #[test]
    fn csv_header_and_fields() {
        let s = csv_string(&[row("relmat")]);
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("algo,n,m,d,mu,delta,phase,millis,verified,generic"));
        assert_eq!(lines.next(), Some("relmat,16,2,8,2,8,total,1.5,true,true"));
    }

    #[test]
    fn json_mirrors_csv() {
        let v = serde_json::to_value([row("horner")]).unwrap();
        assert_eq!(v[0]["algo"], "horner");
        assert_eq!(v[0]["millis"], 1.5);
        assert_eq!(v[0].as_object().unwrap().len(), 10);
    }

    #[test]
    fn slopes() {
        let pts: Vec<(usize, f64)> = [64usize, 128, 256].iter().map(|&n| (n, (n * n) as f64)).collect();
        assert!((loglog_slope(&pts).unwrap() - 2.0).abs() < 1e-9);
        assert_eq!(loglog_slope(&pts[..1]), None);
    }

    #[test]
    fn digest_distinguishes() {
        assert_eq!(digest(&[1, 2]), digest(&[1, 2]));
        assert_ne!(digest(&[1, 2]), digest(&[2, 1]));
    }
}
