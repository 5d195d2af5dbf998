use two4two::render::{render_scene, RenderConfig};
use two4two::scene::{sample_scene, SamplerConfig};
use two4two::rng;

fn main() {
    let config = RenderConfig::default();
    let sampler = SamplerConfig::default();
    let t0 = std::time::Instant::now();
    for i in 0..6u64 {
        let mut r = rng::stream(100 + i, "viz");
        let params = sample_scene(&sampler, &mut r).unwrap();
        let sample = render_scene(&params, &config).unwrap();
        sample.save(
            std::path::Path::new(&format!("/tmp/viz_{i}.png")),
            std::path::Path::new(&format!("/tmp/viz_{i}_mask.png")),
        ).unwrap();
        println!("{i}: class={} legs={:.2} shape={:.2} color={:.2} yaw={:.2} coverage={:.1}%",
            params.class_label, params.legs_position, params.shape, params.color,
            params.rotation_yaw, sample.animal_pixel_fraction()*100.0);
    }
    println!("128x128 renders took {:?} for 6 images", t0.elapsed());
    let t0 = std::time::Instant::now();
    let desk = RenderConfig::desk();
    for i in 0..20u64 {
        let mut r = rng::stream(i, "timing");
        let params = sample_scene(&sampler, &mut r).unwrap();
        let _ = render_scene(&params, &desk).unwrap();
    }
    println!("64x64 renders: {:?} for 20 images", t0.elapsed());
}
