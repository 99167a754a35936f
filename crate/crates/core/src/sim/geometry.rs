//! Pairwise hard-sphere kinematics: contact prediction and elastic resolution.

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];

#[inline]
pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn add_scaled(a: Vec3, b: Vec3, s: f64) -> Vec3 {
    [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]]
}

#[inline]
pub fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Angle between two vectors, robust near 0 and π.
pub fn angle_between(a: Vec3, b: Vec3) -> f64 {
    norm(cross(a, b)).atan2(dot(a, b))
}

/// Rotates `v` by `angle` about the unit axis `axis`, which must be perpendicular to `v`.
pub fn rotate_perpendicular(v: Vec3, axis: Vec3, angle: f64) -> Vec3 {
    let (s, c) = angle.sin_cos();
    add_scaled(scale(v, c), cross(axis, v), s)
}

/// Unit vector perpendicular to `v` obtained by projecting out `v` from `trial`.
/// Returns `None` when `trial` is (nearly) parallel to `v`.
pub fn perpendicular_unit(v: Vec3, trial: Vec3) -> Option<Vec3> {
    let vv = dot(v, v);
    if vv == 0.0 {
        return None;
    }
    let p = add_scaled(trial, v, -dot(trial, v) / vv);
    let n = norm(p);
    if n < 1e-8 * norm(trial) {
        None
    } else {
        Some(scale(p, 1.0 / n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    Open,
    /// Cubic periodic box of the given edge length.
    Periodic {
        length: f64,
    },
}

impl Boundary {
    /// Separation `to − from` under the minimum-image convention.
    #[inline]
    pub fn separation(&self, from: Vec3, to: Vec3) -> Vec3 {
        let mut d = sub(to, from);
        if let Boundary::Periodic { length } = *self {
            for x in &mut d {
                *x -= length * (*x / length).round();
            }
        }
        d
    }

    /// Maps a position back into [0, L).
    #[inline]
    pub fn wrap(&self, mut p: Vec3) -> Vec3 {
        if let Boundary::Periodic { length } = *self {
            for x in &mut p {
                *x = x.rem_euclid(length);
                if *x >= length {
                    *x = 0.0;
                }
            }
        }
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Body {
    pub position: Vec3,
    pub velocity: Vec3,
}

/// Tolerated overlap when predicting, relative to the radius. Round-off in
/// contact times leaves just-collided pairs a few 1e-12 r inside contact after
/// ~10⁵ events.
const PREDICT_OVERLAP_TOL: f64 = 1e-9;
/// Tolerated contact-distance mismatch when resolving, relative to the radius.
const CONTACT_TOL: f64 = 1e-9;

/// Time until two equal spheres of `radius` first touch, or `None` if they never do.
///
/// Solves |Δx + Δv t| = 2r for the smallest t ≥ 0 with Δx the minimum-image
/// separation. Tangential contact (zero discriminant) counts as a collision.
pub fn predict_pair_collision(
    pos_a: Vec3,
    vel_a: Vec3,
    pos_b: Vec3,
    vel_b: Vec3,
    radius: f64,
    boundary: Boundary,
) -> Result<Option<f64>> {
    let dx = boundary.separation(pos_a, pos_b);
    let dv = sub(vel_b, vel_a);
    let contact = 2.0 * radius;
    let c = dot(dx, dx) - contact * contact;
    let min_dist = contact - PREDICT_OVERLAP_TOL * radius;
    if c < 0.0 && dot(dx, dx) < min_dist * min_dist {
        return Err(Error::Integrity(format!(
            "spheres overlap: centre distance {:e} < contact {:e}",
            norm(dx),
            contact
        )));
    }
    let b = dot(dx, dv);
    if b >= 0.0 {
        return Ok(None);
    }
    let vv = dot(dv, dv);
    let disc = b * b - vv * c;
    if disc < 0.0 {
        return Ok(None);
    }
    // c / (−b + √disc) equals (−b − √disc)/vv without cancellation.
    let t = c / (-b + disc.sqrt());
    Ok(Some(t.max(0.0)))
}

/// Elastic collision of equal masses in contact: the velocity components along
/// the line of centres are exchanged.
pub fn resolve_elastic_collision(
    a: &mut Body,
    b: &mut Body,
    radius: f64,
    boundary: Boundary,
) -> Result<()> {
    let dx = boundary.separation(a.position, b.position);
    let dist = norm(dx);
    let contact = 2.0 * radius;
    if !((dist - contact).abs() <= CONTACT_TOL * radius) {
        return Err(Error::Integrity(format!(
            "collision resolved away from contact: distance {dist:e}, expected {contact:e}"
        )));
    }
    let n = scale(dx, 1.0 / dist);
    let dv = sub(b.velocity, a.velocity);
    let transfer = dot(dv, n);
    a.velocity = add_scaled(a.velocity, n, transfer);
    b.velocity = add_scaled(b.velocity, n, -transfer);
    Ok(())
}

/// dφ/dθ for the outgoing direction φ of a sphere hitting an equal sphere, as a
/// function of the contact angle θ between the line of approach and the line
/// of centres, in the centre-of-mass frame. Reflection about the line of
/// centres gives φ = π − 2θ, so the magnitude is 2 for every θ.
pub fn deflection_sensitivity(theta: f64) -> f64 {
    debug_assert!(theta.abs() < PI / 2.0);
    2.0
}

/// Outgoing direction angle (in the collision plane) of sphere A after a
/// centre-of-mass-frame collision at contact angle `theta`.
pub fn outgoing_angle(theta: f64) -> Result<f64> {
    let radius = 1.0;
    let speed = 1.0;
    // A moves along +y, B along −y; the line of centres from A to B makes
    // angle θ with +y in the x–y plane.
    let n = [theta.sin(), theta.cos(), 0.0];
    let mut a = Body {
        position: [0.0; 3],
        velocity: [0.0, speed, 0.0],
    };
    let mut b = Body {
        position: scale(n, 2.0 * radius),
        velocity: [0.0, -speed, 0.0],
    };
    resolve_elastic_collision(&mut a, &mut b, radius, Boundary::Open)?;
    Ok(a.velocity[1].atan2(a.velocity[0]))
}

/// Central finite difference of [`outgoing_angle`] through the collision resolver.
pub fn deflection_sensitivity_numeric(theta: f64, step: f64) -> Result<f64> {
    if !(theta.abs() < PI / 2.0) {
        return Err(Error::domain(
            "theta",
            "contact angle must satisfy |θ| < π/2",
        ));
    }
    let plus = outgoing_angle(theta + step)?;
    let minus = outgoing_angle(theta - step)?;
    let mut diff = plus - minus;
    // unwrap across the ±π branch cut
    if diff > PI {
        diff -= 2.0 * PI;
    } else if diff < -PI {
        diff += 2.0 * PI;
    }
    Ok((diff / (2.0 * step)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const OPEN: Boundary = Boundary::Open;

    #[test]
    fn head_on_contact_time() {
        let r = 0.25;
        let t = predict_pair_collision(
            [0.0; 3],
            [0.0; 3],
            [4.0 * r, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            r,
            OPEN,
        )
        .unwrap()
        .unwrap();
        assert!((t - 2.0 * r).abs() < 1e-15);
    }

    #[test]
    fn receding_pair_never_meets() {
        let r = 0.1;
        let got = predict_pair_collision(
            [0.0; 3],
            [0.0; 3],
            [1.0, 0.2, 0.0],
            [0.5, 0.0, 0.0],
            r,
            OPEN,
        )
        .unwrap();
        assert_eq!(got, None);
    }

    #[test]
    fn missing_pair_never_meets() {
        let got = predict_pair_collision(
            [0.0; 3],
            [0.0; 3],
            [3.0, 1.5, 0.0],
            [-1.0, 0.0, 0.0],
            0.5,
            OPEN,
        )
        .unwrap();
        assert_eq!(got, None);
    }

    #[test]
    fn grazing_contact_is_the_double_root() {
        // Δx = (3, 2r, 0), Δv = (−1, 0, 0): |Δx + Δv t|² = (3 − t)² + 4r², minimum 4r² at t = 3.
        let r = 0.5;
        let t = predict_pair_collision(
            [0.0; 3],
            [0.0; 3],
            [3.0, 2.0 * r, 0.0],
            [-1.0, 0.0, 0.0],
            r,
            OPEN,
        )
        .unwrap()
        .unwrap();
        assert_eq!(t, 3.0);
    }

    #[test]
    fn overlap_is_an_integrity_error() {
        let r = 1.0;
        let e = predict_pair_collision(
            [0.0; 3],
            [0.0; 3],
            [1.5, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            r,
            OPEN,
        );
        assert!(matches!(e, Err(Error::Integrity(_))));
        // within tolerance and approaching: immediate contact
        let t = predict_pair_collision(
            [0.0; 3],
            [0.0; 3],
            [2.0 - 1e-12, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            r,
            OPEN,
        );
        assert_eq!(t.unwrap(), Some(0.0));
    }

    #[test]
    fn periodic_image_collision() {
        let l = 10.0;
        let r = 0.5;
        // B sits near the far wall; its nearest image is 2 units to the left of A.
        let t = predict_pair_collision(
            [0.5, 5.0, 5.0],
            [-1.0, 0.0, 0.0],
            [8.5, 5.0, 5.0],
            [0.0; 3],
            r,
            Boundary::Periodic { length: l },
        )
        .unwrap()
        .unwrap();
        assert!((t - 1.0).abs() < 1e-12);
    }

    #[test]
    fn head_on_equal_speeds_reverse() {
        let r = 1.0;
        let mut a = Body {
            position: [0.0; 3],
            velocity: [2.0, 0.0, 0.0],
        };
        let mut b = Body {
            position: [2.0, 0.0, 0.0],
            velocity: [-2.0, 0.0, 0.0],
        };
        resolve_elastic_collision(&mut a, &mut b, r, OPEN).unwrap();
        assert_eq!(a.velocity, [-2.0, 0.0, 0.0]);
        assert_eq!(b.velocity, [2.0, 0.0, 0.0]);
    }

    #[test]
    fn grazing_leaves_velocities() {
        let r = 1.0;
        let mut a = Body {
            position: [0.0; 3],
            velocity: [0.0, 1.0, 0.0],
        };
        let mut b = Body {
            position: [2.0, 0.0, 0.0],
            velocity: [0.0, -3.0, 0.5],
        };
        let (a0, b0) = (a, b);
        resolve_elastic_collision(&mut a, &mut b, r, OPEN).unwrap();
        assert_eq!(a.velocity, a0.velocity);
        assert_eq!(b.velocity, b0.velocity);
    }

    #[test]
    fn resolve_rejects_non_contact() {
        let mut a = Body {
            position: [0.0; 3],
            velocity: [1.0, 0.0, 0.0],
        };
        let mut b = Body {
            position: [3.0, 0.0, 0.0],
            velocity: [0.0; 3],
        };
        assert!(matches!(
            resolve_elastic_collision(&mut a, &mut b, 1.0, OPEN),
            Err(Error::Integrity(_))
        ));
    }

    #[test]
    fn fig1_sensitivity() {
        assert_eq!(deflection_sensitivity(0.3), 2.0);
        for theta in [0.1, 0.7, -0.4, 1.2] {
            let d = deflection_sensitivity_numeric(theta, 1e-6).unwrap();
            assert!((d - 2.0).abs() < 1e-4, "theta={theta}: {d}");
        }
        assert!(deflection_sensitivity_numeric(2.0, 1e-6).is_err());
    }

    #[test]
    fn wrap_into_box() {
        let b = Boundary::Periodic { length: 2.0 };
        assert_eq!(b.wrap([-0.5, 2.5, 1.0]), [1.5, 0.5, 1.0]);
        let w = b.wrap([-1e-18, 0.0, 0.0]);
        assert!(w[0] >= 0.0 && w[0] < 2.0);
    }

    #[test]
    fn rotation_preserves_speed_and_angle() {
        let v = [1.0, 2.0, -0.5];
        let axis = perpendicular_unit(v, [0.3, -0.1, 0.9]).unwrap();
        let w = rotate_perpendicular(v, axis, 1e-3);
        assert!((norm(w) - norm(v)).abs() < 1e-14);
        assert!((angle_between(v, w) - 1e-3).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn collision_conserves(
            va in prop::array::uniform3(-5.0f64..5.0),
            vb in prop::array::uniform3(-5.0f64..5.0),
            dir in prop::array::uniform3(-1.0f64..1.0),
        ) {
            let n = norm(dir);
            prop_assume!(n > 1e-3);
            let r = 0.7;
            let mut a = Body { position: [0.0; 3], velocity: va };
            let mut b = Body { position: scale(dir, 2.0 * r / n), velocity: vb };
            let e0 = dot(va, va) + dot(vb, vb);
            let p0 = [va[0] + vb[0], va[1] + vb[1], va[2] + vb[2]];
            resolve_elastic_collision(&mut a, &mut b, r, OPEN).unwrap();
            let e1 = dot(a.velocity, a.velocity) + dot(b.velocity, b.velocity);
            prop_assert!((e1 - e0).abs() <= 1e-12 * e0.max(1e-300));
            let scale_p = norm(va) + norm(vb);
            for (k, before) in p0.iter().enumerate() {
                prop_assert!((a.velocity[k] + b.velocity[k] - before).abs() <= 1e-12 * scale_p);
            }
        }

        #[test]
        fn predicted_time_reaches_contact(
            pa in prop::array::uniform3(0.0f64..20.0),
            pb in prop::array::uniform3(0.0f64..20.0),
            va in prop::array::uniform3(-3.0f64..3.0),
            vb in prop::array::uniform3(-3.0f64..3.0),
        ) {
            let r = 0.5;
            let boundary = Boundary::Periodic { length: 20.0 };
            prop_assume!(norm(boundary.separation(pa, pb)) > 2.0 * r);
            if let Some(t) = predict_pair_collision(pa, va, pb, vb, r, boundary).unwrap() {
                let d = boundary.separation(add_scaled(pa, va, t), add_scaled(pb, vb, t));
                prop_assert!((norm(d) - 2.0 * r).abs() < 1e-9);
            }
        }
    }
}
