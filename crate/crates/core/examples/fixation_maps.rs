// Fixation density maps, leave-one-observer-out maps and shuffled AUC.

use salbase::frontend::{fixation_map, inter_observer_map, FixationSet};
use salbase::metrics::shuffled_auc;
use salbase::synthetic::scene;

pub fn run_example() -> salbase::Result<()> {
    let scenes: Vec<_> = (0..4).map(|i| scene(120, 90, 70 + i)).collect();
    let target = &scenes[0];
    let map = fixation_map(&target.fixations, 8.0)?;
    println!(
        "{} fixations from observers {:?}, peak at {:?}",
        target.fixations.len(),
        target.fixations.observers(),
        map.argmax()
    );

    // Negatives: fixations recorded on the other images.
    let others: Vec<FixationSet> = scenes[1..].iter().map(|s| s.fixations.clone()).collect();
    let negatives = FixationSet::merged(&others).expect("at least one other image");
    println!("sAUC of the all-observer map: {:.3}", shuffled_auc(&map, &target.fixations, &negatives)?);

    for observer in target.fixations.observers() {
        let held = inter_observer_map(&target.fixations, observer, 8.0)?;
        let own = FixationSet::new(
            120,
            90,
            target.fixations.points().iter().copied().filter(|p| p.observer == observer).collect(),
        )?;
        println!(
            "observer {observer} predicted by the others: sAUC {:.3}",
            shuffled_auc(&held, &own, &negatives)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("fixation example");
}
