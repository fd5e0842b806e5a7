//! CSV reading and writing for root sets: comma separated, header row,
//! `.` decimal point, 20 significant digits, LF line endings.

use crate::numerics::{format as numfmt, HpReal};
use crate::roots::RootSet;

const SIG: usize = 20;

/// One row of a roots CSV; `iterations` only appears in refine output.
#[derive(Clone, Debug)]
pub struct RootRow {
    pub re: HpReal,
    pub im: HpReal,
    pub source_q: u64,
    pub residual: HpReal,
    pub iterations: Option<u32>,
}

/// `re,im,source_q,residual` for the roots command.
pub fn write_roots_csv(set: &RootSet, source_q: u64) -> String {
    let mut out = String::from("re,im,source_q,residual\n");
    for r in &set.roots {
        out.push_str(&format!(
            "{},{},{},{}\n",
            numfmt::to_scientific_string(&r.value.re, SIG),
            numfmt::to_scientific_string(&r.value.im, SIG),
            source_q,
            numfmt::to_scientific_string(&r.residual, SIG),
        ));
    }
    out
}

/// `re,im,residual,seed_q,iterations` for the refine command.
pub fn write_refined_csv(
    roots: &[crate::lsa::RefinedRoot],
    seed_q: u64,
) -> String {
    let mut out = String::from("re,im,residual,seed_q,iterations\n");
    for r in roots {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            numfmt::to_scientific_string(&r.value.re, SIG),
            numfmt::to_scientific_string(&r.value.im, SIG),
            numfmt::to_scientific_string(&r.residual, SIG),
            seed_q,
            r.iterations,
        ));
    }
    out
}

/// Reads either column layout back; unknown columns are ignored.
pub fn parse_roots_csv(text: &str, prec: u32) -> Result<Vec<RootRow>, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty CSV")?;
    let columns: Vec<&str> = header.split(',').map(str::trim).collect();
    let find = |name: &str| columns.iter().position(|c| *c == name);
    let re_col = find("re").ok_or("missing `re` column")?;
    let im_col = find("im").ok_or("missing `im` column")?;
    let q_col = find("source_q").or_else(|| find("seed_q"));
    let res_col = find("residual");
    let iter_col = find("iterations");
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let get = |col: usize| -> Result<&str, String> {
            fields
                .get(col)
                .copied()
                .ok_or_else(|| format!("row {}: missing column {}", i + 2, col + 1))
        };
        let re = numfmt::parse_decimal(get(re_col)?, prec).map_err(|e| format!("row {}: {e}", i + 2))?;
        let im = numfmt::parse_decimal(get(im_col)?, prec).map_err(|e| format!("row {}: {e}", i + 2))?;
        let source_q = match q_col {
            Some(c) => get(c)?
                .parse::<u64>()
                .map_err(|_| format!("row {}: bad q value", i + 2))?,
            None => 0,
        };
        let residual = match res_col {
            Some(c) => numfmt::parse_decimal(get(c)?, prec).map_err(|e| format!("row {}: {e}", i + 2))?,
            None => HpReal::zero(prec),
        };
        let iterations = match iter_col {
            Some(c) => Some(
                get(c)?
                    .parse::<u32>()
                    .map_err(|_| format!("row {}: bad iteration count", i + 2))?,
            ),
            None => None,
        };
        rows.push(RootRow { re, im, source_q, residual, iterations });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{HpComplex, Rounding};
    use crate::roots::{Domain, RootEntry};

    #[test]
    fn roundtrip_preserves_printed_precision() {
        let set = RootSet {
            roots: vec![
                RootEntry {
                    value: HpComplex::from_f64s(0.7878849110133925, -12.25, 128),
                    residual: HpReal::from_f64(1.5e-22, 128),
                    multiplicity: 1,
                },
                RootEntry {
                    value: HpComplex::from_f64s(-1.0, 480.43017, 128),
                    residual: HpReal::zero(128),
                    multiplicity: 1,
                },
            ],
            domain: Domain::SPlane,
        };
        let csv = write_roots_csv(&set, 306);
        assert!(csv.ends_with('\n'));
        assert!(!csv.contains('\r'));
        let rows = parse_roots_csv(&csv, 128).unwrap();
        assert_eq!(rows.len(), 2);
        for (row, entry) in rows.iter().zip(&set.roots) {
            // Printing the re-parsed value reproduces the original bytes.
            assert_eq!(
                crate::numerics::format::to_scientific_string(&row.re, 20),
                crate::numerics::format::to_scientific_string(&entry.value.re, 20)
            );
            assert_eq!(row.source_q, 306);
            let diff = row.re.sub(&entry.value.re, Rounding::Nearest).abs();
            assert!(diff.to_f64() < 1e-18);
        }
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_roots_csv("", 64).is_err());
        assert!(parse_roots_csv("x,y\n1,2\n", 64).is_err());
        assert!(parse_roots_csv("re,im\n1,zzz\n", 64).is_err());
    }
}
