//! Smallest scaling that lets the attacker cancel every input, w = -Bu.
use rci_bounds::attack::{dos_feasible, dos_threshold};
use rci_bounds::presets;

fn main() {
    for (name, sys) in [("unstable", presets::unstable_example()), ("double integrator", presets::double_integrator())] {
        let t = dos_threshold(&sys).unwrap().expect("W covers -BU for some scaling");
        println!("{name}: -BU inside alpha*W from alpha = {t:.4}");
        for a in [0.5 * t, t, 1.5 * t] {
            println!("  alpha {a:.4}: {}", dos_feasible(&sys, a).unwrap());
        }
    }
}
