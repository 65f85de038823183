use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tower::ServiceExt;

use farpoint_core::farthest::{curve_j, farpoints_on_surface, root_r};
use farpoint_core::{Face, PlanePoint, SurfacePoint};
use farpoint_service::num::round9;
use farpoint_service::{router, schema};

async fn get(uri: &str) -> (StatusCode, String) {
    get_with(router(None), uri).await
}

async fn get_with(app: axum::Router, uri: &str) -> (StatusCode, String) {
    let resp = app
        .oneshot(Request::builder().uri(uri).body(Body::empty()).unwrap())
        .await
        .unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

async fn get_json(uri: &str) -> (StatusCode, Value) {
    let (s, body) = get(uri).await;
    (s, serde_json::from_str(&body).unwrap())
}

#[tokio::test]
async fn point_on_bottom_edge() {
    let (s, v) = get_json("/api/point?face=0&x=0.5&y=0").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["region"], "RightOfJ");
    assert_eq!(v["f"], serde_json::json!([0.666666667, 0.0]));
    assert_eq!(
        v["distance"].as_f64().unwrap(),
        round9(259.0_f64.sqrt() / 6.0)
    );
    assert_eq!(v["farthest"].as_array().unwrap().len(), 1);
    assert_eq!(v["farthest"][0]["label"], "(235)");
    assert_eq!(v["voronoi"]["cells"].as_array().unwrap().len(), 6);
    // On the bottom edge of T the essential vertices merge in pairs.
    let labels: Vec<&str> = v["voronoi"]["essential"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["label"].as_str().unwrap())
        .collect();
    assert_eq!(labels, ["(0125)", "(2345)"]);
    assert!(v["orbit"].is_null());

    let (_, v) = get_json(&format!(
        "/api/point?face=0&x=0.5&y={:?}",
        0.25 * 3.0_f64.sqrt() * 0.5
    ))
    .await;
    assert_eq!(v["voronoi"]["essential"].as_array().unwrap().len(), 4);
}

#[tokio::test]
async fn cone_point_and_orbit() {
    let (s, v) = get_json("/api/point?face=0&x=1&y=0").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["region"], "SharpVertex");
    assert_eq!(v["distance"], 3.0);
    assert_eq!(v["farthest"][0]["point"]["face"], 7);
    assert!(v["voronoi"].is_null());

    let (_, v) = get_json("/api/point?face=0&x=0.5&y=0&orbit=4").await;
    let xs: Vec<f64> = v["orbit"]["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p[0].as_f64().unwrap())
        .collect();
    assert_eq!(xs, [0.5, 0.666666667, 0.8, 0.888888889]);
    assert_eq!(v["orbit"]["terminated_by"], "max_iter");
}

#[tokio::test]
async fn other_faces_report_folding() {
    // Face 7 shares chart coordinates with face 0 under the antipodal map.
    let (_, a) = get_json("/api/point?face=7&x=0.5&y=0").await;
    assert_eq!(a["fundamental"], serde_json::json!([0.5, 0.0]));
    assert_eq!(a["symmetry"]["flips"], 7);
    assert_eq!(a["farthest"][0]["point"]["face"], 0);
}

#[tokio::test]
async fn two_farthest_points_on_j() {
    let x = 0.245;
    let (s, v) = get_json(&format!(
        "/api/point?face=0&x={x}&y={:.17}",
        curve_j(x).unwrap()
    ))
    .await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["region"], "OnJ");
    assert!(v["f"].is_null());
    assert_eq!(v["f_images"].as_array().unwrap().len(), 2);
    assert_eq!(v["farthest"].as_array().unwrap().len(), 2);
}

#[tokio::test]
async fn errors_are_structured() {
    let (s, v) = get_json("/api/point?face=0&x=abc&y=0").await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"]["kind"], "bad_parameter");
    let (s, v) = get_json("/api/point?face=0&y=0").await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"]["kind"], "bad_parameter");
    let (s, v) = get_json("/api/point?face=0&x=3&y=3").await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"]["kind"], "off_surface");
    let (s, v) = get_json("/api/point?face=9&x=0&y=0").await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"]["kind"], "bad_parameter");
    let (s, v) = get_json("/api/point?x=0&y=0&orbit=0").await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"]["kind"], "bad_parameter");
    let (s, v) = get_json("/api/nothing").await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_eq!(v["error"]["kind"], "not_found");
    let (s, v) = get_json("/").await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_eq!(v["error"]["kind"], "not_found");
}

#[tokio::test]
async fn curve_j_samples() {
    let (s, v) = get_json("/api/curve_j?samples=2").await;
    assert_eq!(s, StatusCode::OK);
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 2);
    assert_eq!(pts[0][0].as_f64().unwrap(), round9(root_r()));
    assert!(pts[0][1].as_f64().unwrap().abs() < 1e-10);
    assert!(pts[1][0].as_f64().unwrap() < 0.25);
    let (s, v) = get_json("/api/curve_j?samples=1").await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"]["kind"], "bad_parameter");
    let (_, v) = get_json("/api/curve_j?samples=50").await;
    let xs: Vec<f64> = v["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p[0].as_f64().unwrap())
        .collect();
    assert!(xs.windows(2).all(|w| w[0] < w[1]));
}

#[tokio::test]
async fn limit_set_and_health() {
    let (s, v) = get_json("/api/limit_set").await;
    assert_eq!(s, StatusCode::OK);
    let faces = v["faces"].as_array().unwrap();
    assert_eq!(faces.len(), 8);
    assert!(faces
        .iter()
        .all(|f| f["segments"].as_array().unwrap().len() == 6));
    let (s, v) = get_json("/healthz").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[tokio::test]
async fn responses_are_deterministic_and_match_library() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for _ in 0..50 {
        let face: u8 = rng.random_range(0..8);
        let (mut u, mut v): (f64, f64) = (rng.random(), rng.random());
        if u + v > 1.0 {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        let q = SurfacePoint::from_barycentric(Face::new(face).unwrap(), [1.0 - u - v, u, v]);
        let uri = format!(
            "/api/point?face={face}&x={:?}&y={:?}&orbit=3",
            q.coords.x, q.coords.y
        );
        let (s1, b1) = get(&uri).await;
        let (s2, b2) = get(&uri).await;
        assert_eq!(s1, StatusCode::OK);
        assert_eq!(s2, StatusCode::OK);
        assert_eq!(b1, b2);
        let direct = serde_json::to_string(&schema::point_response(&q, Some(3)).unwrap()).unwrap();
        assert_eq!(b1, direct);
        let lib = farpoints_on_surface(&q).unwrap();
        let v: Value = serde_json::from_str(&b1).unwrap();
        assert_eq!(v["distance"].as_f64().unwrap(), round9(lib.result.distance));
        assert_eq!(v["region"], lib.result.class.name());
        for (j, p) in v["farthest"].as_array().unwrap().iter().zip(&lib.points) {
            assert_eq!(j["point"]["face"], p.face.id());
            assert_eq!(j["point"]["x"].as_f64().unwrap(), round9(p.coords.x));
            assert_eq!(j["point"]["y"].as_f64().unwrap(), round9(p.coords.y));
        }
    }
}

#[tokio::test]
async fn polygons_are_closed_and_counterclockwise() {
    let (_, v) = get_json("/api/point?face=0&x=0.3&y=0.1").await;
    let vor = &v["voronoi"];
    let mut polys = vec![vor["hexagon"].clone(), vor["a0"].clone()];
    polys.extend(
        vor["cells"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["polygon"].clone()),
    );
    for poly in polys {
        let pts: Vec<PlanePoint> = poly
            .as_array()
            .unwrap()
            .iter()
            .map(|p| PlanePoint::new(p[0].as_f64().unwrap(), p[1].as_f64().unwrap()))
            .collect();
        assert_eq!(pts.first(), pts.last());
        let area: f64 = pts.windows(2).map(|w| w[0].cross(w[1])).sum();
        assert!(area > 0.0);
    }
}

#[tokio::test]
async fn static_assets() {
    let dir = std::env::temp_dir().join(format!("farpoint-static-{}", std::process::id()));
    std::fs::create_dir_all(dir.join("js")).unwrap();
    std::fs::write(dir.join("index.html"), "<html>explorer</html>").unwrap();
    std::fs::write(dir.join("js/app.js"), "console.log(1)").unwrap();
    let (s, body) = get_with(router(Some(dir.clone())), "/").await;
    assert_eq!(s, StatusCode::OK);
    assert!(body.contains("explorer"));
    let (s, _) = get_with(router(Some(dir.clone())), "/js/app.js").await;
    assert_eq!(s, StatusCode::OK);
    let (s, _) = get_with(router(Some(dir.clone())), "/missing.css").await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    let (s, _) = get_with(router(Some(dir.clone())), "/api/unknown").await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    std::fs::remove_dir_all(dir).unwrap();
}
