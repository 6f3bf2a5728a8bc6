//! Field arithmetic on (re, im) pairs, plus the Joukowski map.

use super::geom::Vec2;

pub fn cadd(a: Vec2, b: Vec2) -> Vec2 {
    a + b
}

pub fn csub(a: Vec2, b: Vec2) -> Vec2 {
    a - b
}

pub fn cmul(a: Vec2, b: Vec2) -> Vec2 {
    Vec2::new(a.x * b.x - a.y * b.y, a.x * b.y + a.y * b.x)
}

/// `None` when the divisor is exactly zero.
pub fn cdiv(a: Vec2, b: Vec2) -> Option<Vec2> {
    if b.x == 0.0 && b.y == 0.0 {
        return None;
    }
    let d = b.x * b.x + b.y * b.y;
    Some(Vec2::new((a.x * b.x + a.y * b.y) / d, (a.y * b.x - a.x * b.y) / d))
}

pub fn creciprocal(z: Vec2) -> Option<Vec2> {
    cdiv(Vec2::new(1.0, 0.0), z)
}

/// J(z) = z + 1/z.
pub fn joukowski(z: Vec2) -> Option<Vec2> {
    creciprocal(z).map(|r| z + r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_conjugates() {
        let p = cmul(Vec2::new(1.0, 1.0), Vec2::new(1.0, -1.0));
        assert_eq!(p, Vec2::new(2.0, 0.0));
    }

    #[test]
    fn joukowski_fixed_values() {
        assert_eq!(joukowski(Vec2::new(1.0, 0.0)).unwrap(), Vec2::new(2.0, 0.0));
        let at_i = joukowski(Vec2::new(0.0, 1.0)).unwrap();
        assert!(at_i.norm() < 1e-15); // i + 1/i = i - i = 0
    }

    #[test]
    fn joukowski_on_unit_circle_is_real() {
        for theta in [0.0, std::f64::consts::PI / 3.0, std::f64::consts::PI / 2.0] {
            let z = Vec2::new(theta.cos(), theta.sin());
            let j = joukowski(z).unwrap();
            assert!((j.x - 2.0 * theta.cos()).abs() < 1e-12);
            assert!(j.y.abs() <= 1e-15);
        }
    }

    #[test]
    fn division_by_exact_zero_is_none() {
        assert!(cdiv(Vec2::new(1.0, 2.0), Vec2::new(0.0, 0.0)).is_none());
    }

    #[test]
    fn reciprocal_matches_hand_division() {
        // 1/(1+i) = (1-i)/2, worked out by multiplying through by the conjugate.
        let r = creciprocal(Vec2::new(1.0, 1.0)).unwrap();
        assert!((r.x - 0.5).abs() < 1e-15 && (r.y + 0.5).abs() < 1e-15);
    }
}
