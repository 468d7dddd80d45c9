use std::fs;
use std::io::{BufRead, BufReader, ErrorKind, Write};
use std::net::{TcpListener, TcpStream};
use std::path::{Component, Path, PathBuf};

use anyhow::{bail, Context, Result};
use layerdepth::bundle::BundleDocument;
use log::{info, warn};

/// Serves `bundle` read-only at `/bundle.json` and static files from `ui_dir`.
pub fn serve(bundle: &Path, host: &str, port: u16, ui_dir: Option<&Path>) -> Result<()> {
    let body = fs::read(bundle).with_context(|| format!("reading {}", bundle.display()))?;
    BundleDocument::from_json(std::str::from_utf8(&body).context("bundle is not UTF-8")?)
        .with_context(|| format!("validating {}", bundle.display()))?;
    let listener = match TcpListener::bind((host, port)) {
        Ok(l) => l,
        Err(e) if e.kind() == ErrorKind::AddrInUse => bail!("port {port} is already in use"),
        Err(e) => return Err(e).with_context(|| format!("binding {host}:{port}")),
    };
    info!("serving on http://{}", listener.local_addr()?);
    for stream in listener.incoming() {
        match stream {
            Ok(s) => {
                if let Err(e) = handle(s, &body, ui_dir) {
                    warn!("request failed: {e}");
                }
            }
            Err(e) => warn!("accept failed: {e}"),
        }
    }
    Ok(())
}

fn handle(mut stream: TcpStream, bundle: &[u8], ui_dir: Option<&Path>) -> std::io::Result<()> {
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut request_line = String::new();
    reader.read_line(&mut request_line)?;
    // Drain headers; bodies are never expected.
    let mut line = String::new();
    while reader.read_line(&mut line)? > 2 {
        line.clear();
    }
    let mut parts = request_line.split_whitespace();
    let (method, target) = (parts.next().unwrap_or(""), parts.next().unwrap_or("/"));
    let path = target.split(['?', '#']).next().unwrap_or("/");
    if method != "GET" && method != "HEAD" {
        return respond(&mut stream, method, "405 Method Not Allowed", "text/plain", b"method not allowed\n");
    }
    if path == "/bundle.json" {
        return respond(&mut stream, method, "200 OK", "application/json", bundle);
    }
    match ui_dir.and_then(|d| resolve(d, path)).and_then(|p| fs::read(&p).ok().map(|b| (p, b))) {
        Some((p, b)) => respond(&mut stream, method, "200 OK", content_type(&p), &b),
        None => respond(&mut stream, method, "404 Not Found", "text/plain", b"not found\n"),
    }
}

/// Maps a URL path into `root`, refusing anything that would leave it.
fn resolve(root: &Path, url_path: &str) -> Option<PathBuf> {
    let rel = url_path.trim_start_matches('/');
    let rel = if rel.is_empty() || rel.ends_with('/') { format!("{rel}index.html") } else { rel.to_string() };
    let rel = Path::new(&rel);
    if !rel.components().all(|c| matches!(c, Component::Normal(_))) {
        return None;
    }
    let p = root.join(rel);
    p.is_file().then_some(p)
}

fn content_type(p: &Path) -> &'static str {
    match p.extension().and_then(|e| e.to_str()) {
        Some("html") => "text/html; charset=utf-8",
        Some("js") => "text/javascript",
        Some("css") => "text/css",
        Some("json") => "application/json",
        Some("png") => "image/png",
        Some("svg") => "image/svg+xml",
        Some("wasm") => "application/wasm",
        _ => "application/octet-stream",
    }
}

fn respond(s: &mut TcpStream, method: &str, status: &str, ctype: &str, body: &[u8]) -> std::io::Result<()> {
    write!(
        s,
        "HTTP/1.1 {status}\r\nContent-Type: {ctype}\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
        body.len()
    )?;
    if method != "HEAD" {
        s.write_all(body)?;
    }
    s.flush()
}
