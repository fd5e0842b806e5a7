//! End-to-end export: roots of two lattice approximations to the golden
//! polynomial as CSV, then a combined SVG scatter with the stability circle
//! of the better one.

use dirichlet_lsa::cli::{cmd_plot, cmd_roots, specfile::parse_spec, JobConfig};
use dirichlet_lsa::numerics::BigRational;
use std::path::Path;

fn main() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let text = std::fs::read_to_string(data.join("golden.poly")).unwrap();
    let spec = parse_spec(&text).unwrap();

    let out_dir = std::env::temp_dir().join("dirichlet-lsa-example");
    std::fs::create_dir_all(&out_dir).unwrap();

    let mut csvs = Vec::new();
    for cap in [120u64, 1000] {
        let cfg = JobConfig {
            precision: 128,
            max_degree: cap,
            strip_height: Some(BigRational::from_integer(60.into())),
            ..JobConfig::default()
        };
        let csv = cmd_roots(&spec, &cfg).unwrap();
        let path = out_dir.join(format!("golden_cap{cap}.csv"));
        std::fs::write(&path, &csv).unwrap();
        println!("wrote {} ({} rows)", path.display(), csv.lines().count() - 1);
        csvs.push((format!("cap {cap}"), csv));
    }

    let svg = cmd_plot(&csvs, Some(55.0)).unwrap();
    let path = out_dir.join("golden_overlay.svg");
    std::fs::write(&path, &svg).unwrap();
    println!("wrote {}", path.display());
}
