//! The property suite on the punctured disk, printed as JSON.

use qhgeom::analysis::{run_suite, SuiteConfig};
use qhgeom::Domain;

fn main() -> Result<(), qhgeom::Error> {
    let dom = Domain::from_json(r#"{"model": "punctured_unit_disk"}"#)?;
    let mut cfg = SuiteConfig::preset("dstar-default")?;
    cfg.seed = 11;
    let rep = run_suite(&dom, &cfg)?;
    for c in &rep.checks {
        println!("{:<28} {:<5} {}", c.name, if c.pass { "pass" } else { "FAIL" }, c.detail);
    }
    println!("{}", serde_json::to_string_pretty(&rep).expect("report serializes"));
    Ok(())
}
