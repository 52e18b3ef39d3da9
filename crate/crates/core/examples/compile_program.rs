//! Turns a written program into motion commands.
//!
//!     cargo run -p hpl-core --example compile_program -- "up, rotate_left, forward_right"

use hpl_core::compiler::{compile, parse_symbols, reverse_commands, CompilerConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "up, up, rotate_left, forward_right, down".into());
    let program = parse_symbols(&text)?;
    let cfg = CompilerConfig::default();
    let commands = compile(&program, &cfg);

    for (symbol, cmd) in program.symbols().iter().zip(&commands) {
        println!("{:>13} -> {}", symbol.name(), serde_json::to_string(cmd)?);
    }
    println!("arcs follow a {:.1} mm radius", cfg.arc_radius_mm());
    println!(
        "undo: {}",
        serde_json::to_string(&reverse_commands(&commands))?
    );
    Ok(())
}
