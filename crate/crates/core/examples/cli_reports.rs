//! Drives the command-line front end programmatically and reads back its
//! JSON output.

use metazeta::cli::{run, Command, OutputFormat, PolyJson, RunConfig};

fn main() {
    let report = run(&RunConfig::new(Command::Example)).expect("example runs");
    print!("{}", report.render(OutputFormat::Table));

    let config = RunConfig {
        output: OutputFormat::Json,
        vectors: vec!["phi(t=0, n=0, b=0) - 1/2*phi(t=1/3, n=1, b=0)".into()],
        ..RunConfig::new(Command::CheckFe)
    };
    let report = run(&config).expect("check-fe runs");
    for case in report.json["cases"].as_array().expect("cases") {
        let lhs: PolyJson = serde_json::from_value(case["lhs"].clone()).expect("poly");
        let poly = lhs.to_poly(3).expect("exact value");
        println!("mu = {}: lhs {poly}, pass {}", case["mu"], case["pass"]);
    }
}
