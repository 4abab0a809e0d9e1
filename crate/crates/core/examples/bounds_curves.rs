//! Per-k bounds for both example systems, and the certified scaling.
use rci_bounds::bounds::best_bound;
use rci_bounds::presets;
use rci_bounds::spectral::decompose;

fn main() {
    let systems = [
        ("unstable", presets::unstable_example(), None),
        ("double integrator", presets::double_integrator(), Some(presets::double_integrator_structure())),
    ];
    for (name, sys, jordan) in systems {
        let spec = decompose(&sys.a, jordan.as_deref()).expect("spectral data");
        let best = best_bound(&sys, &spec, 20).expect("bounds");
        println!("{name}");
        for p in best.per_k.iter().filter(|p| [1, 2, 4, 10, 20].contains(&p.k)) {
            println!("  k={:>2}  {:.5}  ({} on block {})", p.k, p.value, p.theorem.label(), p.block);
        }
        let c = best.certificate;
        println!("  no RCI set for any alpha > {:.5} ({:?}, k* = {:?})", c.alpha, c.theorem, c.k_star);
    }
}
