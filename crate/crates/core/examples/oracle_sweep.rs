//! Exact critical scaling from the set recursion, next to the closed-form bound.
use rci_bounds::bounds::best_bound;
use rci_bounds::oracle::critical_alpha;
use rci_bounds::presets;
use rci_bounds::spectral::decompose;

fn main() {
    let sys = presets::unstable_example();
    let spec = decompose(&sys.a, None).unwrap();
    let best = best_bound(&sys, &spec, 15).unwrap();
    println!("{:>3} {:>9} {:>9}", "k", "alpha*", "bound");
    for k in 1..=15 {
        let bound = best.min_at(k).unwrap();
        let c = critical_alpha(&sys, k, 1e-5, 1.05 * bound).unwrap();
        println!("{k:>3} {:>9.5} {bound:>9.5}", c.estimate);
    }
}
