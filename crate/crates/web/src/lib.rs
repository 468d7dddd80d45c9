//! WebAssembly bindings for the layerdepth browser demo.

pub mod scene;

use scene::Scene;
use wasm_bindgen::prelude::*;

#[wasm_bindgen]
pub struct Demo {
    scene: Scene,
}

#[wasm_bindgen]
impl Demo {
    /// Random layered scene of `size`×`size` pixels.
    #[wasm_bindgen(constructor)]
    pub fn new(seed: u32, size: u32, layers: usize) -> Result<Demo, JsError> {
        Scene::synthetic(u64::from(seed), size, layers).map(|scene| Demo { scene }).map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen(js_name = fromSvg)]
    pub fn from_svg(text: &str) -> Result<Demo, JsError> {
        Scene::from_svg(text).map(|scene| Demo { scene }).map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen(getter)]
    pub fn width(&self) -> u32 {
        self.scene.width()
    }

    #[wasm_bindgen(getter)]
    pub fn height(&self) -> u32 {
        self.scene.height()
    }

    #[wasm_bindgen(getter)]
    pub fn layers(&self) -> usize {
        self.scene.layer_count()
    }

    pub fn image(&self) -> Vec<u8> {
        self.scene.image_rgba()
    }

    pub fn depth(&self) -> Vec<u8> {
        self.scene.depth_rgba()
    }

    pub fn split(&self, t: f64, front: bool) -> Vec<u8> {
        self.scene.split_rgba(t, front)
    }

    pub fn bins(&self, edges: Vec<f64>) -> Result<Vec<u8>, JsError> {
        self.scene.bins_rgba(&edges).map_err(|e| JsError::new(&e))
    }

    /// JSON with the traced SVG and its fidelity numbers.
    pub fn vectorize(&self, trace_epsilon: f64, curve_fit: bool) -> Result<String, JsError> {
        let out = self.scene.vectorize(trace_epsilon, curve_fit).map_err(|e| JsError::new(&e))?;
        serde_json::to_string(&out).map_err(|e| JsError::new(&e.to_string()))
    }
}
