//! Drives the robot over the bundled playground and reports each step.
//!
//!     cargo run -p hpl-core --example simulate -- "up, up"

use hpl_core::compiler::{compile, parse_symbols, CompilerConfig};
use hpl_core::playground::{reached, run, EnergyModel, PlaygroundMap};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::env::args().nth(1).unwrap_or_else(|| "up, up".into());
    let map = PlaygroundMap::default_map();
    let commands = compile(&parse_symbols(&text)?, &CompilerConfig::default());
    let result = run(&commands, &map, &EnergyModel::default())?;

    for entry in &result.trajectory {
        let p = entry.pose;
        let node = map
            .node_at(map.snap(p.x_mm, p.y_mm))
            .map_or("?", |n| n.id.as_str());
        println!(
            "node {node}  ({:5.0}, {:5.0}) mm  heading {:3.0}  energy {:5.1}",
            p.x_mm, p.y_mm, p.heading_deg, entry.energy
        );
    }
    println!(
        "status: {:?}, total cost {:.1}",
        result.status, result.total_cost
    );
    for (icon, _) in map.icons() {
        if reached(&result, &map, icon)? {
            println!("reached the {icon}");
        }
    }
    Ok(())
}
