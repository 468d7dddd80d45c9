use layerdepth_web::scene::Scene;

#[test]
fn synthetic_scene_buffers_have_canvas_size() {
    let s = Scene::synthetic(4, 64, 5).unwrap();
    assert_eq!((s.width(), s.height(), s.layer_count()), (64, 64, 5));
    let n = 64 * 64 * 4;
    assert_eq!(s.image_rgba().len(), n);
    assert_eq!(s.depth_rgba().len(), n);
    assert_eq!(s.bins_rgba(&[2.5]).unwrap().len(), n);
}

#[test]
fn split_partitions_pixels() {
    let s = Scene::synthetic(9, 48, 6).unwrap();
    for t in [0.5, 2.5, 5.5] {
        let (front, back) = (s.split_rgba(t, true), s.split_rgba(t, false));
        for k in 0..48 * 48 {
            let (a, b) = (front[4 * k + 3], back[4 * k + 3]);
            assert_eq!(u16::from(a) + u16::from(b), 255);
            assert_eq!(a == 255, f64::from(s.depth.indices[k]) > t);
        }
    }
}

#[test]
fn nearest_layer_is_brightest() {
    let s = Scene::synthetic(2, 32, 4).unwrap();
    let d = s.depth_rgba();
    let k = s.depth.indices.iter().position(|&i| i == 4).unwrap();
    assert_eq!(d[4 * k], 255);
}

#[test]
fn unsorted_edges_are_rejected() {
    let s = Scene::synthetic(1, 32, 3).unwrap();
    assert!(s.bins_rgba(&[3.0, 1.0]).is_err());
}

#[test]
fn vectorize_reproduces_the_scene() {
    let s = Scene::synthetic(5, 128, 6).unwrap();
    let out = s.vectorize(0.45, false).unwrap();
    assert!(out.svg.starts_with("<svg"));
    assert_eq!(out.layers, 6);
    assert!(out.rgb_mse < 1e-3, "{}", out.rgb_mse);
    assert!(out.order > 0.99, "{}", out.order);
}

#[test]
fn svg_input_and_bad_sizes() {
    let s = Scene::from_svg(
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="20" height="10"><rect width="20" height="10" fill="#fff"/><rect x="5" width="5" height="5" fill="#f00"/></svg>"##,
    )
    .unwrap();
    assert_eq!((s.width(), s.height(), s.layer_count()), (20, 10, 2));
    assert!(Scene::synthetic(0, 4, 3).is_err());
    assert!(Scene::synthetic(0, 64, 0).is_err());
    assert!(Scene::from_svg("<nope").is_err());
}
