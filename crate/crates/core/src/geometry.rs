//! Angle arithmetic, radar re-sweep, circular-arc prediction and intercept solving.
//!
//! Angles are radians, counterclockwise-positive, with `0` pointing along `+x`.
//! The arena uses `+y` up.

use core::f64::consts::{PI, TAU};
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Central angles at or below this magnitude are treated as straight-line motion.
pub const STRAIGHT_EPSILON: f64 = 1e-9;

/// Largest centre-to-bullet distance that still counts as a hit.
pub const HIT_TOLERANCE: f64 = 18.0;

/// Iteration budget of the intercept fixed-point loop.
pub const INTERCEPT_MAX_ITERATIONS: usize = 50;

/// Convergence threshold of the intercept loop, in arena units.
pub const INTERCEPT_CONVERGENCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeometryError {
    NonFinite,
    NonPositiveRadius,
    NegativeLength,
    NonPositiveDuration,
    NonPositiveSpeed,
    /// The central angle is too small to define a circle; use linear prediction.
    StraightLine,
    /// The intercept loop did not settle within its budget.
    NoSolution,
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            GeometryError::NonFinite => "non-finite input",
            GeometryError::NonPositiveRadius => "radius must be positive",
            GeometryError::NegativeLength => "arc length must be non-negative",
            GeometryError::NonPositiveDuration => "duration must be positive",
            GeometryError::NonPositiveSpeed => "speed must be positive",
            GeometryError::StraightLine => "central angle too small: straight-line motion",
            GeometryError::NoSolution => "no intercept solution within the iteration budget",
        };
        f.write_str(msg)
    }
}

impl core::error::Error for GeometryError {}

/// A plane angle in radians.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    pub const fn from_radians(radians: f64) -> Self {
        Angle(radians)
    }

    pub fn from_degrees(degrees: f64) -> Self {
        Angle(degrees.to_radians())
    }

    pub const fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }

    /// Converts a platform heading (clockwise degrees, 0 = north) into this crate's convention.
    pub fn from_compass_degrees(degrees: f64) -> Self {
        Angle((90.0 - degrees).to_radians()).normalized()
    }

    /// Inverse of [`Angle::from_compass_degrees`], in `[0, 360)`.
    pub fn compass_degrees(self) -> f64 {
        let d = 90.0 - self.0.to_degrees();
        let d = d - 360.0 * libm::floor(d / 360.0);
        if d >= 360.0 {
            0.0
        } else {
            d
        }
    }

    pub fn normalized(self) -> Self {
        Angle(wrap(self.0))
    }

    pub fn abs(self) -> Self {
        Angle(self.0.abs())
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn clamp_magnitude(self, limit: Angle) -> Self {
        Angle(self.0.clamp(-limit.0, limit.0))
    }

    pub fn cos(self) -> f64 {
        libm::cos(self.0)
    }

    pub fn sin(self) -> f64 {
        libm::sin(self.0)
    }

    /// Direction of the vector `(dx, dy)`.
    pub fn of_vector(dx: f64, dy: f64) -> Self {
        Angle(libm::atan2(dy, dx))
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        Angle(self.0 + rhs.0)
    }
}

impl AddAssign for Angle {
    fn add_assign(&mut self, rhs: Angle) {
        self.0 += rhs.0;
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        Angle(self.0 - rhs.0)
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle(-self.0)
    }
}

impl Mul<f64> for Angle {
    type Output = Angle;
    fn mul(self, rhs: f64) -> Angle {
        Angle(self.0 * rhs)
    }
}

fn wrap(a: f64) -> f64 {
    let r = a - TAU * libm::floor((a + PI) / TAU);
    if r <= -PI {
        r + TAU
    } else if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Reduces `a` into `(-π, π]`.
pub fn normalize_angle(a: Angle) -> Result<Angle, GeometryError> {
    if !a.is_finite() {
        return Err(GeometryError::NonFinite);
    }
    Ok(a.normalized())
}

/// `radar_heading - heading + bearing`, wrapped into `(-π, π]`.
///
/// `bearing` follows the sensor convention where a target on the left of
/// the body is negative. With headings in the counterclockwise convention the
/// result is how far the radar sits past the target, so re-sweeping means
/// turning the radar back by this amount.
pub fn radar_sweep_back(
    radar_heading: Angle,
    heading: Angle,
    bearing: Angle,
) -> Result<Angle, GeometryError> {
    normalize_angle(radar_heading - heading + bearing)
}

/// Radius of the circle on which an arc of `arc_length` subtends `central_angle`.
pub fn arc_radius(arc_length: f64, central_angle: Angle) -> Result<f64, GeometryError> {
    if !arc_length.is_finite() || !central_angle.is_finite() {
        return Err(GeometryError::NonFinite);
    }
    if arc_length < 0.0 {
        return Err(GeometryError::NegativeLength);
    }
    let theta = central_angle.radians().abs();
    if theta <= STRAIGHT_EPSILON {
        return Err(GeometryError::StraightLine);
    }
    Ok(arc_length / theta)
}

/// Point at angle `angle_cax` on a circle of `radius`, in the circle-centred frame.
pub fn predict_point(radius: f64, angle_cax: Angle) -> Result<(f64, f64), GeometryError> {
    if !radius.is_finite() || !angle_cax.is_finite() {
        return Err(GeometryError::NonFinite);
    }
    if radius <= 0.0 {
        return Err(GeometryError::NonPositiveRadius);
    }
    Ok((radius * angle_cax.cos(), radius * angle_cax.sin()))
}

/// Position plus body heading.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub heading: Angle,
}

impl Pose {
    pub fn new(x: f64, y: f64, heading: Angle) -> Self {
        Pose { x, y, heading }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.heading.is_finite()
    }

    pub fn distance_to(&self, x: f64, y: f64) -> f64 {
        libm::hypot(x - self.x, y - self.y)
    }
}

/// Circular-motion hypothesis for a moving target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcPath {
    pub radius: f64,
    /// Signed, radians per tick; positive turns counterclockwise.
    pub angular_rate: f64,
    pub center: (f64, f64),
}

impl ArcPath {
    /// Path through `pose` moving forward at `speed` while turning at `angular_rate`.
    pub fn from_motion(pose: Pose, speed: f64, angular_rate: f64) -> Result<Self, GeometryError> {
        if !pose.is_finite() || !speed.is_finite() || !angular_rate.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if angular_rate.abs() <= STRAIGHT_EPSILON {
            return Err(GeometryError::StraightLine);
        }
        if speed == 0.0 {
            return Err(GeometryError::NonPositiveSpeed);
        }
        let radius = speed.abs() / angular_rate.abs();
        let travel = if speed < 0.0 {
            pose.heading + Angle(PI)
        } else {
            pose.heading
        };
        Ok(Self::through(pose.x, pose.y, travel, radius, angular_rate))
    }

    fn through(x: f64, y: f64, travel: Angle, radius: f64, angular_rate: f64) -> Self {
        let side = if angular_rate > 0.0 { PI / 2.0 } else { -PI / 2.0 };
        let normal = travel + Angle(side);
        ArcPath {
            radius,
            angular_rate,
            center: (x + radius * normal.cos(), y + radius * normal.sin()),
        }
    }

    pub fn speed(&self) -> f64 {
        self.radius * self.angular_rate.abs()
    }

    /// Angle of `(x, y)` about the centre, measured from `+x`.
    pub fn phase_of(&self, x: f64, y: f64) -> Angle {
        Angle::of_vector(x - self.center.0, y - self.center.1)
    }

    /// Position reached after `t` ticks from the point at `phase`.
    pub fn position_at(&self, phase: Angle, t: f64) -> (f64, f64) {
        let (px, py) = predict_point(self.radius, phase + Angle(self.angular_rate * t))
            .unwrap_or((0.0, 0.0));
        (self.center.0 + px, self.center.1 + py)
    }
}

/// Motion model recovered from two observations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TargetMotion {
    Arc(ArcPath),
    Straight,
}

/// Fits the circle traced between two poses `dt` ticks apart.
///
/// The heading change equals the central angle swept, so the radius follows
/// from the chord between the two positions.
pub fn fit_arc(p_prev: Pose, p_now: Pose, dt: f64) -> Result<TargetMotion, GeometryError> {
    if !p_prev.is_finite() || !p_now.is_finite() || !dt.is_finite() {
        return Err(GeometryError::NonFinite);
    }
    if dt <= 0.0 {
        return Err(GeometryError::NonPositiveDuration);
    }
    let central = (p_now.heading - p_prev.heading).normalized();
    let dx = p_now.x - p_prev.x;
    let dy = p_now.y - p_prev.y;
    let chord = libm::hypot(dx, dy);
    let half = central.radians().abs() / 2.0;
    if central.radians().abs() <= STRAIGHT_EPSILON || chord == 0.0 {
        return Ok(TargetMotion::Straight);
    }
    let arc = chord * half / libm::sin(half);
    let radius = arc_radius(arc, central)?;
    // Reversing targets travel against their heading.
    let forward = dx * p_now.heading.cos() + dy * p_now.heading.sin()
        + dx * p_prev.heading.cos()
        + dy * p_prev.heading.sin();
    let travel = if forward < 0.0 {
        p_now.heading + Angle(PI)
    } else {
        p_now.heading
    };
    Ok(TargetMotion::Arc(ArcPath::through(
        p_now.x,
        p_now.y,
        travel,
        radius,
        central.radians() / dt,
    )))
}

/// Firing solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intercept {
    pub fire_angle: Angle,
    pub time_to_hit: f64,
    pub point: (f64, f64),
}

/// Aim for a bullet of `bullet_speed` leaving `shooter` now.
///
/// Straight-line targets use the closed-form quadratic; arcs use the
/// fixed-point iteration `t <- |target(t) - shooter| / bullet_speed`.
pub fn solve_intercept(
    shooter: (f64, f64),
    target: Pose,
    target_speed: f64,
    motion: TargetMotion,
    bullet_speed: f64,
) -> Result<Intercept, GeometryError> {
    if !shooter.0.is_finite()
        || !shooter.1.is_finite()
        || !target.is_finite()
        || !target_speed.is_finite()
        || !bullet_speed.is_finite()
    {
        return Err(GeometryError::NonFinite);
    }
    if bullet_speed <= 0.0 {
        return Err(GeometryError::NonPositiveSpeed);
    }
    match motion {
        TargetMotion::Straight => solve_linear(shooter, target, target_speed, bullet_speed),
        TargetMotion::Arc(path) => solve_arc(shooter, target, &path, bullet_speed),
    }
}

fn aim(shooter: (f64, f64), point: (f64, f64), t: f64) -> Intercept {
    Intercept {
        fire_angle: Angle::of_vector(point.0 - shooter.0, point.1 - shooter.1),
        time_to_hit: t,
        point,
    }
}

fn solve_linear(
    shooter: (f64, f64),
    target: Pose,
    target_speed: f64,
    bullet_speed: f64,
) -> Result<Intercept, GeometryError> {
    let rx = target.x - shooter.0;
    let ry = target.y - shooter.1;
    let vx = target_speed * target.heading.cos();
    let vy = target_speed * target.heading.sin();
    // |r + v t|^2 = (s t)^2
    let a = vx * vx + vy * vy - bullet_speed * bullet_speed;
    let b = 2.0 * (rx * vx + ry * vy);
    let c = rx * rx + ry * ry;
    let t = if a.abs() < 1e-12 {
        if b >= 0.0 {
            return Err(GeometryError::NoSolution);
        }
        -c / b
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            return Err(GeometryError::NoSolution);
        }
        let sq = libm::sqrt(disc);
        let t1 = (-b - sq) / (2.0 * a);
        let t2 = (-b + sq) / (2.0 * a);
        let (lo, hi) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
        if lo >= 0.0 {
            lo
        } else if hi >= 0.0 {
            hi
        } else {
            return Err(GeometryError::NoSolution);
        }
    };
    let point = (target.x + vx * t, target.y + vy * t);
    Ok(aim(shooter, point, t))
}

fn solve_arc(
    shooter: (f64, f64),
    target: Pose,
    path: &ArcPath,
    bullet_speed: f64,
) -> Result<Intercept, GeometryError> {
    let phase = path.phase_of(target.x, target.y);
    let mut t = libm::hypot(target.x - shooter.0, target.y - shooter.1) / bullet_speed;
    for _ in 0..INTERCEPT_MAX_ITERATIONS {
        let (px, py) = path.position_at(phase, t);
        let next = libm::hypot(px - shooter.0, py - shooter.1) / bullet_speed;
        if (next - t).abs() * bullet_speed < INTERCEPT_CONVERGENCE {
            return Ok(aim(shooter, path.position_at(phase, next), next));
        }
        t = next;
    }
    Err(GeometryError::NoSolution)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_angle(Angle(0.0)).unwrap().radians(), 0.0);
        assert!(close(normalize_angle(Angle(3.0 * PI)).unwrap().radians(), PI, 1e-12));
        assert!(close(
            normalize_angle(Angle(-1.5 * PI)).unwrap().radians(),
            PI / 2.0,
            1e-12
        ));
        assert_eq!(normalize_angle(Angle(-PI)).unwrap().radians(), PI);
        assert_eq!(
            normalize_angle(Angle(f64::NAN)),
            Err(GeometryError::NonFinite)
        );
    }

    #[test]
    fn radar_sweep_examples() {
        let d = |v: f64| Angle::from_degrees(v);
        let r = radar_sweep_back(d(90.0), d(45.0), d(-30.0)).unwrap();
        assert!(close(r.degrees(), 15.0, 1e-9));
        let r = radar_sweep_back(d(123.0), d(123.0), d(0.0)).unwrap();
        assert!(close(r.degrees(), 0.0, 1e-9));
        let r = radar_sweep_back(d(10.0), d(350.0), d(0.0)).unwrap();
        assert!(close(r.degrees(), 20.0, 1e-9));
        assert!(radar_sweep_back(d(f64::INFINITY), d(0.0), d(0.0)).is_err());
    }

    #[test]
    fn radar_sweep_matches_vector_oracle() {
        // Wrapped difference from dot/cross products of unit vectors.
        let oracle = |radar: f64, heading: f64, bearing: f64| {
            let a = (radar + bearing).to_radians();
            let b = heading.to_radians();
            let (ax, ay) = (libm::cos(a), libm::sin(a));
            let (bx, by) = (libm::cos(b), libm::sin(b));
            libm::atan2(bx * ay - by * ax, ax * bx + ay * by).to_degrees()
        };
        for &(r, h, b) in &[
            (10.0, 350.0, 0.0),
            (300.0, 20.0, -45.0),
            (-170.0, 170.0, 30.0),
            (0.0, 179.0, -179.0),
        ] {
            let got = radar_sweep_back(
                Angle::from_degrees(r),
                Angle::from_degrees(h),
                Angle::from_degrees(b),
            )
            .unwrap()
            .degrees();
            assert!(close(got, oracle(r, h, b), 1e-9), "{r} {h} {b}: {got}");
        }
    }

    #[test]
    fn arc_radius_examples() {
        assert_eq!(arc_radius(30.0, Angle(1.0)).unwrap(), 30.0);
        assert!(close(arc_radius(PI * 40.0, Angle(PI)).unwrap(), 40.0, 1e-12));
        assert_eq!(
            arc_radius(30.0, Angle(1e-12)),
            Err(GeometryError::StraightLine)
        );
        assert_eq!(
            arc_radius(-1.0, Angle(1.0)),
            Err(GeometryError::NegativeLength)
        );
        assert_eq!(arc_radius(30.0, Angle(-1.0)).unwrap(), 30.0);
    }

    #[test]
    fn predict_point_examples() {
        let (x, y) = predict_point(30.0, Angle(0.0)).unwrap();
        assert_eq!((x, y), (30.0, 0.0));
        let (x, y) = predict_point(30.0, Angle(PI / 2.0)).unwrap();
        assert!(close(x, 0.0, 1e-12) && close(y, 30.0, 1e-12));
        let (x, y) = predict_point(30.0, Angle(PI / 4.0)).unwrap();
        let expected = 30.0 * core::f64::consts::FRAC_1_SQRT_2;
        assert!(close(x, expected, 1e-12) && close(y, expected, 1e-12));
        assert!(close(x, 21.213_203_435_596_43, 1e-12));
        assert_eq!(
            predict_point(0.0, Angle(0.0)),
            Err(GeometryError::NonPositiveRadius)
        );
    }

    fn on_circle(cx: f64, cy: f64, r: f64, phase: f64, ccw: bool) -> Pose {
        let tangent = if ccw { phase + PI / 2.0 } else { phase - PI / 2.0 };
        Pose::new(
            cx + r * libm::cos(phase),
            cy + r * libm::sin(phase),
            Angle(tangent).normalized(),
        )
    }

    #[test]
    fn fit_arc_recovers_known_circle() {
        // 10 ticks at omega = 0.05 rad/tick on R = 50.
        let a = on_circle(400.0, 300.0, 50.0, 0.3, true);
        let b = on_circle(400.0, 300.0, 50.0, 0.3 + 0.5, true);
        match fit_arc(a, b, 10.0).unwrap() {
            TargetMotion::Arc(p) => {
                assert!(close(p.radius, 50.0, 1e-6));
                assert!(close(p.angular_rate, 0.05, 1e-9));
                assert!(close(p.center.0, 400.0, 1e-6));
                assert!(close(p.center.1, 300.0, 1e-6));
            }
            other => panic!("expected arc, got {other:?}"),
        }
    }

    #[test]
    fn fit_arc_clockwise_and_quarter() {
        let a = on_circle(0.0, 0.0, 30.0, PI / 2.0, false);
        let b = on_circle(0.0, 0.0, 30.0, 0.0, false);
        match fit_arc(a, b, 4.0).unwrap() {
            TargetMotion::Arc(p) => {
                assert!(close(p.radius, 30.0, 1e-9));
                assert!(close(p.angular_rate * 4.0, -PI / 2.0, 1e-12));
                assert!(close(p.center.0, 0.0, 1e-9) && close(p.center.1, 0.0, 1e-9));
            }
            other => panic!("expected arc, got {other:?}"),
        }
    }

    #[test]
    fn fit_arc_degenerate_and_errors() {
        let a = Pose::new(0.0, 0.0, Angle(0.3));
        let b = Pose::new(10.0, 3.0, Angle(0.3));
        assert_eq!(fit_arc(a, b, 2.0).unwrap(), TargetMotion::Straight);
        assert_eq!(fit_arc(a, b, 0.0), Err(GeometryError::NonPositiveDuration));
        assert_eq!(fit_arc(a, b, -1.0), Err(GeometryError::NonPositiveDuration));
    }

    #[test]
    fn fit_arc_reversing_target() {
        // Driving backwards around a CCW circle: heading points against travel.
        let mut a = on_circle(100.0, 100.0, 40.0, 1.0, true);
        let mut b = on_circle(100.0, 100.0, 40.0, 1.4, true);
        a.heading = a.heading + Angle(PI);
        b.heading = b.heading + Angle(PI);
        match fit_arc(a, b, 4.0).unwrap() {
            TargetMotion::Arc(p) => {
                assert!(close(p.radius, 40.0, 1e-9));
                assert!(close(p.center.0, 100.0, 1e-9) && close(p.center.1, 100.0, 1e-9));
            }
            other => panic!("expected arc, got {other:?}"),
        }
    }

    #[test]
    fn intercept_stationary_target() {
        let target = Pose::new(110.0, 0.0, Angle(1.0));
        let sol = solve_intercept((0.0, 0.0), target, 0.0, TargetMotion::Straight, 11.0).unwrap();
        assert!(close(sol.time_to_hit, 10.0, 1e-9));
        assert!(close(sol.fire_angle.radians(), 0.0, 1e-12));
    }

    #[test]
    fn intercept_receding_faster_target_has_no_solution() {
        let target = Pose::new(100.0, 0.0, Angle(0.0));
        assert_eq!(
            solve_intercept((0.0, 0.0), target, 12.0, TargetMotion::Straight, 11.0),
            Err(GeometryError::NoSolution)
        );
    }

    #[test]
    fn intercept_on_arc_lands_on_target() {
        let target = on_circle(300.0, 200.0, 30.0, 0.0, true);
        let path = ArcPath::from_motion(target, 3.0, 0.1).unwrap();
        assert!(close(path.radius, 30.0, 1e-12));
        let sol = solve_intercept(
            (0.0, 0.0),
            target,
            3.0,
            TargetMotion::Arc(path),
            11.0,
        )
        .unwrap();
        // Tick-level oracle: march both bodies forward one tick at a time.
        let phase = path.phase_of(target.x, target.y);
        let steps = libm::round(sol.time_to_hit) as i64;
        let mut best = f64::INFINITY;
        for k in (steps - 1).max(0)..=steps + 1 {
            let t = k as f64;
            let (tx, ty) = path.position_at(phase, t);
            let bx = 11.0 * t * sol.fire_angle.cos();
            let by = 11.0 * t * sol.fire_angle.sin();
            best = best.min(libm::hypot(tx - bx, ty - by));
        }
        assert!(best < HIT_TOLERANCE, "miss {best}");
    }

    #[test]
    fn compass_round_trip() {
        assert!(close(Angle::from_compass_degrees(0.0).radians(), PI / 2.0, 1e-12));
        assert!(close(Angle::from_compass_degrees(90.0).radians(), 0.0, 1e-12));
        assert!(close(Angle(PI).compass_degrees(), 270.0, 1e-9));
    }
}
