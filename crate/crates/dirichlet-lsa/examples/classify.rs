//! Classification, dimension bounds and stability constants for the bundled
//! example polynomials.

use dirichlet_lsa::cli::specfile::parse_spec;
use dirichlet_lsa::cli::cmd_classify;
use std::path::Path;

fn main() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    for name in [
        "cantor.poly",
        "two_three.poly",
        "golden.poly",
        "type1_2.poly",
        "two_three_five_seven.poly",
        "three_four_thirteen.poly",
    ] {
        let text = std::fs::read_to_string(data.join(name)).expect("data file");
        let spec = parse_spec(&text).expect("valid spec");
        println!("== {name}");
        print!("{}", cmd_classify(&spec, 128).unwrap());
        println!();
    }
}
