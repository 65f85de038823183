use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::{Component, Path, PathBuf};
use std::sync::Arc;

use axum::extract::{Query, State};
use axum::http::{header, StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use tokio::net::TcpListener;

use crate::schema::{self, ApiError, ErrorKind};

#[derive(Clone, Debug, Default)]
struct AppState {
    static_dir: Option<PathBuf>,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match self.kind {
            ErrorKind::BadParameter | ErrorKind::OffSurface => StatusCode::BAD_REQUEST,
            ErrorKind::NotFound => StatusCode::NOT_FOUND,
            ErrorKind::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        };
        (status, Json(self.body())).into_response()
    }
}

type Params = Query<HashMap<String, String>>;

fn param<T: std::str::FromStr>(
    q: &HashMap<String, String>,
    name: &str,
) -> Result<Option<T>, ApiError> {
    match q.get(name) {
        None => Ok(None),
        Some(raw) => raw
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| ApiError::bad_parameter(format!("cannot parse {name}={raw:?}"))),
    }
}

fn coordinate(q: &HashMap<String, String>, name: &str) -> Result<f64, ApiError> {
    let v: f64 = param(q, name)?
        .ok_or_else(|| ApiError::bad_parameter(format!("missing parameter {name}")))?;
    if !v.is_finite() {
        return Err(ApiError::bad_parameter(format!("{name} must be finite")));
    }
    Ok(v)
}

async fn point(Query(q): Params) -> Result<Json<schema::PointResponse>, ApiError> {
    let face: u8 = param(&q, "face")?.unwrap_or(0);
    let p = schema::surface_point(face, coordinate(&q, "x")?, coordinate(&q, "y")?)?;
    let orbit: Option<usize> = param(&q, "orbit")?;
    Ok(Json(schema::point_response(&p, orbit)?))
}

async fn curve_j(Query(q): Params) -> Result<Json<schema::CurveJResponse>, ApiError> {
    let samples: usize = param(&q, "samples")?.unwrap_or(200);
    Ok(Json(schema::curve_j_response(samples)?))
}

async fn limit_set() -> Json<schema::LimitSetResponse> {
    Json(schema::limit_set_response())
}

async fn healthz() -> Json<schema::HealthResponse> {
    Json(schema::health_response())
}

fn content_type(path: &Path) -> &'static str {
    match path.extension().and_then(|e| e.to_str()) {
        Some("html") => "text/html; charset=utf-8",
        Some("js" | "mjs") => "text/javascript; charset=utf-8",
        Some("css") => "text/css; charset=utf-8",
        Some("json") => "application/json",
        Some("svg") => "image/svg+xml",
        Some("png") => "image/png",
        Some("wasm") => "application/wasm",
        Some("ico") => "image/x-icon",
        _ => "application/octet-stream",
    }
}

/// Relative file path for a request path, refusing anything that climbs out.
fn asset_path(uri_path: &str) -> Option<PathBuf> {
    let rel = uri_path.trim_start_matches('/');
    let rel = if rel.is_empty() || rel.ends_with('/') {
        format!("{rel}index.html")
    } else {
        rel.to_string()
    };
    let path = PathBuf::from(rel);
    path.components()
        .all(|c| matches!(c, Component::Normal(_)))
        .then_some(path)
}

async fn fallback(State(state): State<Arc<AppState>>, uri: Uri) -> Response {
    let path = uri.path();
    let missing = || ApiError::not_found(format!("no route for {path}")).into_response();
    if path == "/api" || path.starts_with("/api/") {
        return missing();
    }
    let (Some(dir), Some(rel)) = (&state.static_dir, asset_path(path)) else {
        return missing();
    };
    let file = dir.join(&rel);
    match tokio::fs::read(&file).await {
        Ok(bytes) => ([(header::CONTENT_TYPE, content_type(&file))], bytes).into_response(),
        Err(_) => missing(),
    }
}

/// The application router; `static_dir` holds the UI bundle, if any.
pub fn router(static_dir: Option<PathBuf>) -> Router {
    Router::new()
        .route("/api/point", get(point))
        .route("/api/curve_j", get(curve_j))
        .route("/api/limit_set", get(limit_set))
        .route("/healthz", get(healthz))
        .fallback(fallback)
        .with_state(Arc::new(AppState { static_dir }))
}

pub async fn serve_on(listener: TcpListener, static_dir: Option<PathBuf>) -> std::io::Result<()> {
    axum::serve(listener, router(static_dir)).await
}

pub async fn serve(addr: SocketAddr, static_dir: Option<PathBuf>) -> std::io::Result<()> {
    serve_on(TcpListener::bind(addr).await?, static_dir).await
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asset_paths() {
        assert_eq!(asset_path("/"), Some(PathBuf::from("index.html")));
        assert_eq!(asset_path("/js/app.js"), Some(PathBuf::from("js/app.js")));
        assert_eq!(asset_path("/../etc/passwd"), None);
        assert_eq!(asset_path("/a/../../b"), None);
    }
}
