//! Scene geometry: the room, one ceiling LED, wall-mounted tiltable mirror
//! elements, and a floor-level photodetector.
//!
//! Mirror orientation is parameterized by a yaw angle `alpha` about the
//! wall's vertical axis and a pitch angle `beta` lifting the normal out of
//! the horizontal plane. The specular reflection point is obtained by the
//! mirror-image construction: reflect the LED across the oriented mirror
//! plane and intersect the image-to-PD segment with the plane. That point is
//! the unique one satisfying the specular law, and it must fall inside the
//! W x H aperture for the link to exist.
//!
//! Steering: a mirror aims its reflected beam at a target by aligning its
//! normal with the unit bisector of the LED and target directions. When the
//! target coincides with the true PD position, the reflection point lands
//! exactly on the element center.

use crate::channel::{self, NoiseParams, PdParams, Power};
use crate::error::{InvalidReflection, Result, VlpError};
use crate::Vec3;
use serde::{Deserialize, Serialize};

/// Yaw/pitch pair describing a mirror orientation, radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TiltAngles {
    pub alpha: f64,
    pub beta: f64,
}

/// One single-element mirror on a wall.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OirsElement {
    /// Element center, m.
    pub center: Vec3,
    /// Aperture width (horizontal at rest), m.
    pub width: f64,
    /// Aperture height (vertical at rest), m.
    pub height: f64,
    /// Yaw about the wall's vertical axis, rad.
    pub alpha: f64,
    /// Pitch of the normal out of the horizontal plane, rad.
    pub beta: f64,
    /// Whether the element currently reflects into the room.
    pub active: bool,
    /// Inward-facing unit normal of the carrying wall (rest orientation).
    pub wall_normal: Vec3,
    /// Mirror reflectivity in (0, 1].
    pub reflectivity: f64,
}

impl OirsElement {
    pub fn at_rest(center: Vec3, width: f64, height: f64, wall_normal: Vec3, reflectivity: f64) -> Self {
        OirsElement {
            center,
            width,
            height,
            alpha: 0.0,
            beta: 0.0,
            active: false,
            wall_normal,
            reflectivity,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.width > 0.0 && self.height > 0.0) {
            return Err("mirror width and height must be positive".into());
        }
        let lim = std::f64::consts::FRAC_PI_2;
        if !(self.alpha.abs() < lim && self.beta.abs() < lim) {
            return Err("tilt angles must lie strictly inside +-90 degrees".into());
        }
        if !self.wall_normal.is_unit(1e-9) {
            return Err("wall normal must be a unit vector".into());
        }
        if self.wall_normal.z.abs() > 1e-9 {
            return Err("mirrors are wall-mounted: wall normal must be horizontal".into());
        }
        if !(self.reflectivity > 0.0 && self.reflectivity <= 1.0) {
            return Err("reflectivity must lie in (0, 1]".into());
        }
        Ok(())
    }

    /// Current unit normal from the stored tilt angles.
    pub fn normal(&self) -> Vec3 {
        normal_from_tilt(self.alpha, self.beta, self.wall_normal)
    }

    /// Point the reflected beam at `target`, updating the tilt angles.
    pub fn steer_towards(&mut self, led: Vec3, target: Vec3) -> Result<()> {
        let o = steering_normal(led, self.center, target)?;
        let tilt = tilt_angles_from_normal(o, self.wall_normal)?;
        self.alpha = tilt.alpha;
        self.beta = tilt.beta;
        Ok(())
    }
}

/// Full immutable scene description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scene {
    /// Room extents along x, y, z, m. The room spans [0, dims] per axis.
    pub room_dims: Vec3,
    /// LED position, m.
    pub led: Vec3,
    /// Mirror elements in activation order.
    pub oirs: Vec<OirsElement>,
    /// Ground-truth PD position, m (z = 0).
    pub pd: Vec3,
    pub pd_params: PdParams,
    pub noise_params: NoiseParams,
    pub power: Power,
}

impl Scene {
    pub fn validate(&self) -> Result<()> {
        let err = |msg: String| Err(VlpError::ValidationError(msg));
        self.pd_params.validate().or_else(|e| err(e))?;
        self.noise_params.validate().or_else(|e| err(e))?;
        self.power.validate().or_else(|e| err(e))?;
        let inside = |p: Vec3| {
            (0.0..=self.room_dims.x).contains(&p.x)
                && (0.0..=self.room_dims.y).contains(&p.y)
                && (0.0..=self.room_dims.z).contains(&p.z)
        };
        if !inside(self.led) || self.led.z <= 0.0 {
            return err("led position outside the room".into());
        }
        if !inside(self.pd) {
            return err("pd position outside the room".into());
        }
        if self.pd.z != 0.0 {
            return err("pd must sit on the floor plane (z = 0)".into());
        }
        for (i, el) in self.oirs.iter().enumerate() {
            el.validate()
                .or_else(|e| err(format!("oirs element {i}: {e}")))?;
            if !inside(el.center) {
                return err(format!("oirs element {i}: center outside the room"));
            }
        }
        Ok(())
    }

    pub fn los_distance(&self) -> f64 {
        self.led.distance(self.pd)
    }

    pub fn los_gain(&self) -> f64 {
        channel::los_gain(self.los_distance(), self.led.z, &self.pd_params)
    }

    /// Specular reflection point of element `n` at its current tilt.
    pub fn reflection(&self, n: usize) -> Result<Vec3, InvalidReflection> {
        reflection_point(self.led, self.pd, &self.oirs[n])
    }

    /// Mirror-bounce gain of element `n` at its current tilt.
    ///
    /// `Err` when no specular point exists; `Ok(0.0)` when the point exists
    /// but arrives outside the concentrator FoV.
    pub fn nlos_gain_at_current_tilt(&self, n: usize) -> Result<f64, InvalidReflection> {
        let el = &self.oirs[n];
        let r = self.reflection(n)?;
        let s = self.led.distance(r);
        let dn = r.distance(self.pd);
        if r.z / dn < self.pd_params.fov.cos() {
            return Ok(0.0);
        }
        Ok(channel::nlos_gain(s, dn, r, self.led.z, el.reflectivity, &self.pd_params))
    }

    /// A link is visible when a specular point exists and falls inside the
    /// concentrator FoV. This is the predicate used for coverage blanking.
    pub fn link_visible(&self, n: usize) -> bool {
        matches!(self.nlos_gain_at_current_tilt(n), Ok(g) if g > 0.0)
    }

    /// Steer every mirror's beam at `target`.
    pub fn steer_all_towards(&mut self, target: Vec3) -> Result<()> {
        let led = self.led;
        for el in &mut self.oirs {
            el.steer_towards(led, target)?;
        }
        Ok(())
    }
}

/// Per-path distances and angles of a scene snapshot.
#[derive(Debug, Clone)]
pub struct PathGeometry {
    /// LED-PD distance, m.
    pub d: f64,
    /// LED irradiance angle of the LoS path, rad.
    pub theta: f64,
    /// PD incidence angle of the LoS path, rad (equals `theta` for
    /// co-oriented LED and PD).
    pub phi: f64,
    /// Per-element reflected path, absent where no specular point exists.
    pub nlos: Vec<Option<NlosPath>>,
}

/// Geometry of one reflected path.
#[derive(Debug, Clone, Copy)]
pub struct NlosPath {
    pub reflection_point: Vec3,
    /// LED to reflection point, m.
    pub s_n: f64,
    /// Reflection point to PD, m.
    pub d_n: f64,
    /// Irradiance angle at the LED, rad.
    pub theta_n: f64,
    /// Incidence angle at the PD, rad.
    pub phi_n: f64,
}

/// Distances and angles for every path of the scene at the current tilts.
pub fn path_geometry(scene: &Scene) -> PathGeometry {
    let d = scene.los_distance();
    let c = (scene.led.z / d).clamp(-1.0, 1.0);
    let theta = c.acos();
    let nlos = (0..scene.oirs.len())
        .map(|n| {
            scene.reflection(n).ok().map(|r| {
                let s_n = scene.led.distance(r);
                let d_n = r.distance(scene.pd);
                NlosPath {
                    reflection_point: r,
                    s_n,
                    d_n,
                    theta_n: (((scene.led.z - r.z) / s_n).clamp(-1.0, 1.0)).acos(),
                    phi_n: ((r.z / d_n).clamp(-1.0, 1.0)).acos(),
                }
            })
        })
        .collect();
    PathGeometry { d, theta, phi: theta, nlos }
}

/// Unit bisector of the directions from a mirror center towards the LED and
/// towards a (possibly estimated) PD position.
pub fn steering_normal(led: Vec3, center: Vec3, target: Vec3) -> Result<Vec3> {
    if led == center || target == center {
        return Err(VlpError::DegenerateGeometry("steering target coincides with the mirror center"));
    }
    let a = (led - center).normalized();
    let b = (target - center).normalized();
    let denom = (2.0 + 2.0 * a.dot(b)).sqrt();
    if denom < 1e-9 {
        return Err(VlpError::DegenerateGeometry("antiparallel steering directions"));
    }
    Ok((a + b) / denom)
}

/// Horizontal in-plane axis of a wall: the yaw reference for that wall.
pub fn wall_axis(wall_normal: Vec3) -> Vec3 {
    wall_normal.cross(Vec3::EZ)
}

/// Unit normal realizing the given yaw/pitch on the given wall.
///
/// Reduces to `wall_normal` at alpha = beta = 0, and satisfies
/// `o . e_z = sin(beta)`, `o . wall_axis = sin(alpha) cos(beta)`.
pub fn normal_from_tilt(alpha: f64, beta: f64, wall_normal: Vec3) -> Vec3 {
    let t = wall_axis(wall_normal);
    t * (alpha.sin() * beta.cos()) + wall_normal * (alpha.cos() * beta.cos()) + Vec3::EZ * beta.sin()
}

/// Recover the yaw/pitch of a unit normal relative to its wall.
///
/// Inverse of [`normal_from_tilt`] on the open square (-90, 90) degrees.
pub fn tilt_angles_from_normal(o: Vec3, wall_normal: Vec3) -> Result<TiltAngles> {
    let sz = o.dot(Vec3::EZ);
    if sz.abs() > 1.0 + 1e-12 {
        return Err(VlpError::OutOfDomain("normal not unit: |o.e_z| > 1"));
    }
    let beta = sz.clamp(-1.0, 1.0).asin();
    let cb = beta.cos();
    if cb < 1e-9 {
        return Err(VlpError::GimbalLock);
    }
    let sa = o.dot(wall_axis(wall_normal)) / cb;
    if sa.abs() > 1.0 + 1e-12 {
        return Err(VlpError::OutOfDomain("yaw sine argument exceeds 1"));
    }
    Ok(TiltAngles { alpha: sa.clamp(-1.0, 1.0).asin(), beta })
}

/// Cosine of the incidence angle below which a link counts as grazing.
pub const GRAZING_COS_MIN: f64 = 1e-6;

/// Specular reflection point of the LED on a mirror element, as seen from
/// the PD, at the element's current orientation.
///
/// Mirror-image construction: the LED is reflected across the mirror plane
/// and the image-PD segment is intersected with the plane. The result is
/// checked against the element aperture in the tilted in-plane basis.
pub fn reflection_point(led: Vec3, pd: Vec3, elem: &OirsElement) -> Result<Vec3, InvalidReflection> {
    let o = elem.normal();
    let w = elem.center;
    let dq = (led - w).dot(o);
    let du = (pd - w).dot(o);
    if dq <= 0.0 || du <= 0.0 {
        return Err(InvalidReflection::BehindPlane);
    }
    let image = led - o * (2.0 * dq);
    // (pd - image).o = du + dq > 0, so the segment always crosses the plane
    let t = (w - image).dot(o) / (pd - image).dot(o);
    let r = image + (pd - image) * t;

    // in-plane aperture basis: horizontal axis from z x o, vertical completes it
    let h_axis = Vec3::EZ.cross(o).normalized();
    let v_axis = o.cross(h_axis);
    let local = r - w;
    if local.dot(h_axis).abs() > elem.width / 2.0 || local.dot(v_axis).abs() > elem.height / 2.0 {
        return Err(InvalidReflection::OutOfAperture);
    }

    let cos_inc = (pd - r).dot(o) / pd.distance(r);
    if cos_inc < GRAZING_COS_MIN {
        return Err(InvalidReflection::GrazingIncidence);
    }
    Ok(r)
}
