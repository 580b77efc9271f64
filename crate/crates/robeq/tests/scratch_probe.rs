#[test]
#[ignore]
fn scratch_values() {
    use robeq::model::{SignalModel, ChannelBelief};
    use robeq::equalizers::*;
    use robeq::oracle::*;

    // Spec worked example for the regret solver.
    let m = SignalModel::new(0.0, 1.0, 1.0).unwrap();
    let b = ChannelBelief::new(1.0, 0.2).unwrap();
    let r = minimax_regret_equalizer(&m, &b).unwrap();
    println!("ex1: branch={} w={:.12} l={:.12} obj={:.12e} (1.2/2.44 = {:.12})", r.branch, r.equalizer.w, r.equalizer.l, r.objective, 1.2/2.44);

    // The sorted-curves preset instance.
    let m = SignalModel::new(0.01, 1.0, 1.0).unwrap();
    let b = ChannelBelief::new(1.05, 0.3).unwrap();
    let r = minimax_regret_equalizer(&m, &b).unwrap();
    let o = oracle_minimax_regret(&m, &b, &GridSpec::default_for(&m, &b)).unwrap();
    println!("ex2: branch={} w={:.12} l={:.12} obj={:.12e}", r.branch, r.equalizer.w, r.equalizer.l, r.objective);
    println!("ex2 oracle: w={:.12} l={:.12} obj={:.12e}", o.equalizer.w, o.equalizer.l, o.objective);

    // Zero-mean wide-range instance (expected case4).
    let m = SignalModel::new(0.0, 7.0, 9.6).unwrap();
    let b = ChannelBelief::new(1.73, 0.67).unwrap();
    let r = minimax_regret_equalizer(&m, &b).unwrap();
    let o = oracle_minimax_regret(&m, &b, &GridSpec::default_for(&m, &b)).unwrap();
    println!("ex3: branch={} w={:.12} l={:.12} obj={:.12e}", r.branch, r.equalizer.w, r.equalizer.l, r.objective);
    println!("ex3 oracle: w={:.12} l={:.12} obj={:.12e}", o.equalizer.w, o.equalizer.l, o.objective);

    // Nonzero-mean case4 (the regime that broke the old parametrization).
    let m = SignalModel::new(-0.0015, 6.9946, 9.5804).unwrap();
    let b = ChannelBelief::new(-1.7347, 0.6674).unwrap();
    let r = minimax_regret_equalizer(&m, &b).unwrap();
    let o = oracle_minimax_regret(&m, &b, &GridSpec::default_for(&m, &b)).unwrap();
    println!("ex4: branch={} w={:.12} l={:.12} obj={:.12e}", r.branch, r.equalizer.w, r.equalizer.l, r.objective);
    println!("ex4 oracle: w={:.12} l={:.12} obj={:.12e}", o.equalizer.w, o.equalizer.l, o.objective);

    // Minimax boundary instance.
    let m = SignalModel::new(0.0, 1.0, 1.0).unwrap();
    let b = ChannelBelief::new(2.0, 1.0).unwrap();
    let r = minimax_equalizer(&m, &b);
    println!("mmx boundary: branch={} w={} l={} obj={}", r.branch, r.equalizer.w, r.equalizer.l, r.objective);

    // Minimax mirror check.
    let b = ChannelBelief::new(-1.0, 0.5).unwrap();
    let r = minimax_equalizer(&m, &b);
    println!("mmx mirror: branch={} w={} l={}", r.branch, r.equalizer.w, r.equalizer.l);
    let o = oracle_minimax(&m, &b, &GridSpec::default_for(&m, &b)).unwrap();
    println!("mmx mirror oracle: w={:.9} l={:.9}", o.equalizer.w, o.equalizer.l);
}
