//! Drive the command-line front end from code with a checked-in fixture.

fn main() {
    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/witness.toml");
    let code = nkcross::cli::main_with_args(["nkcross", "verify-lemma2", "--config", fixture, "--no-timestamp"]);
    println!("exit status {code}");
}
