use evcomb::studies::{asymptotics_context1, asymptotics_context2, doubling_schedule, fixtures};
use evcomb::Degree;

fn main() {
    let schedule = doubling_schedule(fixtures::MAX_EXPONENT);
    for degree in [
        Degree::Finite(-2.0),
        Degree::geometric(),
        Degree::Finite(0.5),
        Degree::Finite(2.0),
        Degree::NegInf,
        Degree::PosInf,
    ] {
        let t = asymptotics_context1(&fixtures::context1(degree.clone()), &schedule, fixtures::REPLICATES, 1).unwrap();
        println!("context1 t={degree}: {:?} limits {:?}", t.terminal_check(fixtures::TERMINAL_TOLERANCE), t.limits);
    }
    for (name, study) in [
        ("one true", fixtures::one_true_model()),
        ("two true", fixtures::two_true_models()),
        ("star one", fixtures::condition_star_one_true()),
        ("star two", fixtures::condition_star_two_true()),
    ] {
        let t = asymptotics_context2(&study, &schedule, fixtures::REPLICATES, 1).unwrap();
        let last: Vec<_> =
            t.paths.iter().take(3).map(|p| (p.weights.last().unwrap().clone(), *p.rb.last().unwrap())).collect();
        println!(
            "{name}: {:?} limits {:?} sample {:?}",
            t.terminal_check(fixtures::TERMINAL_TOLERANCE),
            t.limits,
            last
        );
    }
}
