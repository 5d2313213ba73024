//! Radial multipliers of normalized sphere and ball measures, plus the unit
//! ball constants.

#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

/// Volume ω_n of the unit ball.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        1 => 2.0,
        2 => core::f64::consts::PI,
        3 => 4.0 * core::f64::consts::PI / 3.0,
        _ => panic!("dimension {n} unsupported"),
    }
}

/// Surface measure nω_n of the unit sphere.
pub fn unit_sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

/// sin z / z.
pub fn sinc(z: f64) -> f64 {
    if z.abs() < 1e-4 {
        1.0 - z * z / 6.0
    } else {
        z.sin() / z
    }
}

/// Normalized sinc sin(πx)/(πx).
pub fn sinc_pi(x: f64) -> f64 {
    sinc(core::f64::consts::PI * x)
}

/// Fourier transform of the normalized surface measure of S^{n−1} at
/// z = 2πt|ξ|: cos z, J₀(z), sin z / z.
pub fn sphere_symbol(n: usize, z: f64) -> f64 {
    match n {
        1 => z.cos(),
        2 => libm::j0(z),
        3 => sinc(z),
        _ => panic!("dimension {n} unsupported"),
    }
}

/// Fourier transform of the normalized ball indicator at z = 2πt|ξ|:
/// sin z / z, 2J₁(z)/z, 3(sin z − z cos z)/z³.
pub fn ball_symbol(n: usize, z: f64) -> f64 {
    match n {
        1 => sinc(z),
        2 => {
            if z.abs() < 1e-8 {
                1.0 - z * z / 8.0
            } else {
                2.0 * libm::j1(z) / z
            }
        }
        3 => {
            if z.abs() < 0.1 {
                let z2 = z * z;
                1.0 - z2 / 10.0 + z2 * z2 / 280.0 - z2 * z2 * z2 / 15120.0
            } else {
                3.0 * (z.sin() - z * z.cos()) / (z * z * z)
            }
        }
        _ => panic!("dimension {n} unsupported"),
    }
}
