use photonlink::*;

fn main() {
    let tg = TimeGrid::default_for(1.0, 1.5).unwrap();
    let m = optimal_mode(1.0, &tg).unwrap();
    println!("opt norm_sq = {:.12}", m.norm_sq());
    println!("dt = {}, t_start = {}, count = {}", tg.dt(), tg.t_start(), tg.count());
    let k0 = (-tg.t_start() / tg.dt()).round() as usize;
    println!("t at k0 = {}, value = {}", tg.sample(k0), m.values()[k0]);

    let sinc_mode = sinc_temporal_unit(1.5, &tg).unwrap();
    let got = temporal_overlap(&sinc_mode, &m).unwrap();
    let analytic = (2.0 / (std::f64::consts::PI * 1.5)).sqrt() * (1.5f64).atan();
    println!("overlap got {} want {}", got, analytic);

    // susceptibility grid check
    let grid = FrequencyGrid::for_susceptibility(1.0, 0.0).unwrap();
    println!("suscept count = {} (even? {})", grid.count(), grid.count() % 2 == 0);
    let k0 = grid.count() / 2;
    println!("sample at count/2 = {}", grid.sample(k0));

    // coded overlap anchor
    let w = 1.5;
    let n0 = 7usize;
    let chip = w / n0 as f64;
    let zero = PhaseCode::all_zero(n0, chip).unwrap();
    let o = coded_overlap(&zero, chip, 1.0).unwrap();
    println!("coded_overlap zero = {}", o);
    let opt = optimal_mode(1.0, &tg).unwrap();
    let sampled = temporal_overlap(&sinc_mode, &opt).unwrap();
    println!("sampled = {}", sampled);

    // saturation
    let atom = AtomParams::ideal(1.0).unwrap();
    let trace = excite(&m, &atom).unwrap();
    println!("peak = {:.9} at t = {:.6}, bound = {:.9}", trace.peak_value(), trace.peak_time(), trace.bound());
}
