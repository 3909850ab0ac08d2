use clap::Parser;

fn main() {
    let cli = flagmine::cli::Cli::parse();
    if let Err(err) = flagmine::cli::run(cli) {
        // Machine-readable error on stderr; exit 2 for I/O, 3 for config.
        let payload = serde_json::json!({ "kind": err.kind(), "error": err.to_string() });
        eprintln!("{payload}");
        std::process::exit(err.exit_code());
    }
}
