//! Runs an experiment from an inline TOML config and prints the report,
//! exactly as the command-line tool would write it.

use paritysim::experiments::{run_report, ExperimentConfig};

const CONFIG: &str = r#"
experiment = "gate"

[effective]
n_qubits = 2
g_mhz = -250.0
alpha_mhz = -100.0

[noise]
compare = true

[pulse]
gate_time_ns = [20.0, 25.0]
scheme = ["basic", "advanced"]

[run]
seed = 1
"#;

fn main() -> paritysim::Result<()> {
    let config = ExperimentConfig::from_toml(CONFIG)?;
    print!("{}", run_report(&config)?);
    Ok(())
}
