mod common;

#[test]
#[ignore]
fn shooting_values() {
    let s = common::shoot_ground_state();
    println!(
        "mu = {:.6e}, E = {:.6e}, D_fwhm = {:.4}, norm consistency = {:.2e}",
        s.chemical_potential, s.energy, s.fwhm, s.norm_consistency
    );
}
