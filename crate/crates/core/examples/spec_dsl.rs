//! Parses the four preset problem specs and shows a parse error.

use rtsfair::fairness::{format_spec, parse_spec, Preset};

fn main() {
    for p in Preset::ALL {
        let spec = p.spec();
        let text = format_spec(&spec);
        assert_eq!(parse_spec(&text).as_ref(), Ok(&spec));
        println!(
            "{:<7} {text:<28} epm {:?} camera {:?} precision {:.2}",
            p.name(),
            spec.epm_limit,
            spec.camera_mode,
            spec.precision_value()
        );
    }
    let bad = "SC^r_3{E_180, C_2}";
    if let Err(e) = parse_spec(bad) {
        println!("\n{}", e.annotate(bad));
    }
}
