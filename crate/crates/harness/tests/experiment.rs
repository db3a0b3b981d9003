use qcut_harness::{run_experiment, ExperimentConfig};

fn run(text: &str) -> qcut_harness::ExperimentReport {
    run_experiment(&text.parse::<ExperimentConfig>().unwrap()).unwrap()
}

fn check_names(r: &qcut_harness::ExperimentReport) -> Vec<String> {
    r.instances[0].checks.iter().map(|c| c.name.clone()).collect()
}

#[test]
fn tw2_end_to_end() {
    let r = run("family = series-parallel\nn = 14\ninstances = 3\nalgorithm = tw2\nsamples = 300\nseed = 4\n");
    assert!(r.pass, "{r:#?}");
    assert_eq!(check_names(&r), ["6r-bounded", "edge-separation-witness"]);
}

#[test]
fn pathwidth_end_to_end() {
    let r = run("family = pathwidth-2\nn = 10\ninstances = 2\nalgorithm = pathwidth\nsamples = 300\nseed = 2\n");
    assert!(r.pass, "{r:#?}");
}

#[test]
fn cycle_exact_law() {
    let r = run("family = cycle\nn = 12\ninstances = 4\nalgorithm = cycle\n");
    assert!(r.pass, "{r:#?}");
    assert_eq!(check_names(&r), ["separation-lower", "separation-upper"]);
}

#[test]
fn tree_exact_equality() {
    let r = run("family = tree\nn = 20\ninstances = 4\nalgorithm = tree\n");
    assert!(r.pass, "{r:#?}");
}

#[test]
fn cut_rounding() {
    let r = run("family = pathwidth-1\nn = 6\ninstances = 3\nalgorithm = multicut\npairs = 2\ncapacities = 1 5\n");
    assert!(r.pass, "{r:#?}");
    let r = run("family = series-parallel\nn = 6\ninstances = 2\nalgorithm = sparsest\n");
    assert!(r.pass, "{r:#?}");
}

#[test]
fn counterexample_report() {
    let r = run("family = kpr-counterexample\nn = 8\nalgorithm = kpr\n");
    assert!(r.pass, "{r:#?}");
}

#[test]
fn reports_are_reproducible() {
    let text = "family = series-parallel\nn = 9\ninstances = 2\nalgorithm = tw2\nsamples = 50\nseed = 1\n";
    let strip = |mut r: qcut_harness::ExperimentReport| {
        r.millis = 0.0;
        r.instances.iter_mut().for_each(|i| i.millis = 0.0);
        r
    };
    assert_eq!(strip(run(text)), strip(run(text)));
    let json = serde_json::to_value(run(text)).unwrap();
    assert_eq!(json["config"]["algorithm"], "tw2");
}
