//! Rotation rate in, numeric resonance out: the analytic per-direction shift
//! should land where the transmission solver finds the peak.

use fastlight_core::dispersion::DispersionProfile;
use fastlight_core::resonator::{length_from_empty_shift, rotation_response, RingCavity};
use fastlight_core::sagnac::LoopGeometry;
use fastlight_core::spectrum::locate_adaptive;
use std::f64::consts::PI;

const W0: f64 = 2.0 * PI * 5e14;
const GAMMA: f64 = 2.0 * PI * 1e6;

fn ring(fill: f64) -> RingCavity {
    RingCavity::new(LoopGeometry::circle(1.0).unwrap(), 1e3, 1.0, W0, fill).unwrap()
}

#[test]
fn vacuum_ring_shift_matches_spectrum() {
    let c = ring(1.0);
    let p = DispersionProfile::vacuum();
    for omega in [1e-6, 1e-3, 1e-1] {
        let r = rotation_response(&c, &p, omega).unwrap();
        let dl = length_from_empty_shift(&c, c.shift_per_rotation() * omega);
        let res = locate_adaptive(&p, &c, dl, r.dw_minus, 2001).unwrap();
        assert!(
            ((res.detuning - r.dw_minus) / r.dw_minus).abs() < 1e-6,
            "{omega}"
        );
    }
}

#[test]
fn cad_ring_shift_matches_spectrum() {
    for fill in [1.0, 0.5] {
        let c = ring(fill);
        let target = 1.0 - 1.0 / fill;
        let p = DispersionProfile::cad(GAMMA, W0, target).unwrap();
        for omega in [1e-8, 1e-6, 1e-4] {
            let r = rotation_response(&c, &p, omega).unwrap();
            let dl = length_from_empty_shift(&c, c.shift_per_rotation() * omega);
            let res = locate_adaptive(&p, &c, dl, r.dw_minus, 2001).unwrap();
            let e = ((res.detuning - r.dw_minus) / r.dw_minus).abs();
            assert!(e < 1e-2, "fill {fill} omega {omega}: {e}");
            assert!(r.enhancement > 10.0);
        }
    }
}
