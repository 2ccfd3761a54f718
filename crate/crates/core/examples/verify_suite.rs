//! Runs registered identities over their grids and writes the report.
//!
//! `cargo run --release --example verify_suite -- "W*,L8" report.json`

use koshliakov::driver::{write_report, ReportFormat};
use koshliakov::registry::{entries, evaluate_identity, run_suite, GridOverride, ParamValue, Params};
use koshliakov::{EvalConfig, ShapeParam};

fn main() -> koshliakov::Result<()> {
    let mut args = std::env::args().skip(1);
    let filter = args.next().unwrap_or_else(|| "R*,W8,W9,L9,L10,L11,C*".to_string());
    let cfg = EvalConfig::default();

    println!("{} identities registered", entries().len());
    for e in entries().iter().filter(|e| koshliakov::registry::matches_filter(&filter, e.id.id)) {
        println!("  {:<4} {}", e.id.id, e.id.anchor);
    }

    let report = run_suite(&filter, None, &cfg)?;
    let s = &report.summary;
    println!("\n{} cases: {} pass, {} fail, {} skipped", report.cases.len(), s.pass, s.fail, s.skipped);
    for (id, worst) in &s.worst_residual_by_id {
        println!("  {id:<4} worst residual {worst:.2e}");
    }

    // one case at hand-picked parameters, on a denser grid of x
    let mut overrides = GridOverride::new();
    overrides.insert("x".into(), vec!["0.25".into(), "0.5".into(), "4".into()]);
    let dense = run_suite("W8", Some(&overrides), &cfg)?;
    println!("\nW8 on x in {{0.25, 0.5, 4}}: {} cases, {} pass", dense.cases.len(), dense.summary.pass);
    let params: Params = [("p".to_string(), ParamValue::Shape(ShapeParam::Finite(3.0))), ("x".to_string(), ParamValue::Real(0.3))]
        .into_iter()
        .collect();
    let case = evaluate_identity("W9", &params, &cfg)?;
    println!("W9 at p = 3, x = 0.3: residual {:.2e}, {}", case.residual, case.status);

    if let Some(path) = args.next() {
        let format = if path.ends_with(".csv") { ReportFormat::Csv } else { ReportFormat::Json };
        write_report(&report, &path, format)?;
        println!("\nreport written to {path}");
    }
    Ok(())
}
