use farpoint_cli::verify::{run_check, VerifyOptions};
use farpoint_core::farthest::{apply_f, classify, RegionClass};
use farpoint_core::{GeometryError, PlanePoint, SQRT_3};

/// The right branch of `f` with the sign of its `2 sqrt3 x` term flipped.
fn flipped_right(p: PlanePoint) -> Result<Vec<PlanePoint>, GeometryError> {
    if classify(p)? != RegionClass::RightOfJ {
        return Ok(apply_f(p)?.points());
    }
    let (x, y) = (p.x, p.y);
    let num = -x * y - 2.0 * SQRT_3 * x + SQRT_3 * y * y - y;
    Ok(vec![PlanePoint::new(num / (SQRT_3 * x + y + SQRT_3), y)])
}

#[test]
fn sign_flip_in_f_fails_oracle_agreement() {
    let honest = VerifyOptions {
        quick: true,
        ..VerifyOptions::default()
    };
    assert!(run_check(&honest, 2).unwrap().passed);
    let mutated = VerifyOptions {
        predictor: flipped_right,
        ..honest
    };
    let c = run_check(&mutated, 2).unwrap();
    assert!(!c.passed);
    assert!(c
        .parts
        .iter()
        .any(|p| p.what.starts_with("max distance") && !p.passed));
}
