//! Greedy attack along the unstable eigenvector at alpha = 0.3.
use nalgebra::DVector;
use rci_bounds::attack::{project_block, simulate_fullstate, SaturatingFeedback};
use rci_bounds::attack::{Defender, ProjectedWorstCase, ZeroInput};
use rci_bounds::presets;
use rci_bounds::spectral::decompose;

fn main() {
    let sys = presets::unstable_example();
    let spec = decompose(&sys.a, None).unwrap();
    let p = project_block(&sys, &spec, 0, 0.3).unwrap();
    println!("projected: lambda={} drift={:.5} analytic exit={:?}", p.lambda, p.drift().0, p.analytic_exit(0.0));

    let mut defenders: Vec<Box<dyn Defender>> =
        vec![Box::new(ProjectedWorstCase), Box::new(ZeroInput), Box::new(SaturatingFeedback::deadbeat(&sys))];
    for d in defenders.iter_mut() {
        let trace = simulate_fullstate(&sys, &p, &DVector::zeros(2), 200, d.as_mut()).unwrap();
        println!("{:>10}: {}", d.name(), trace.summary(200));
    }
}
