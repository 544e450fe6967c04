//! ONNX-backed feature extraction.

use std::path::Path;
use std::sync::Arc;

use tract_onnx::pb;
use tract_onnx::prelude::*;

use super::{preprocess, FeatureError, FeatureVector, PreprocessConfig, FEATURE_DIM, INPUT_SIZE};
use crate::image::ImageBuffer;

type Plan = Arc<TypedRunnableModel>;

/// Tensor layout the model's image input expects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputLayout {
    /// 1 x 3 x 224 x 224
    Nchw,
    /// 1 x 224 x 224 x 3
    Nhwc,
}

/// A loaded network truncated at its feature layer.
pub struct NeuralExtractor {
    plan: Plan,
    layout: InputLayout,
    preprocess: PreprocessConfig,
    feature_layer: String,
}

impl std::fmt::Debug for NeuralExtractor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NeuralExtractor")
            .field("layout", &self.layout)
            .field("feature_layer", &self.feature_layer)
            .finish()
    }
}

impl NeuralExtractor {
    /// Loads `path` and selects the feature layer. With `layer = None` the
    /// first Relu whose output holds exactly 4096 values is used, falling
    /// back to the model's own output.
    pub fn load(path: &Path, preprocess: PreprocessConfig, layer: Option<&str>) -> Result<Self, FeatureError> {
        let fail = |reason: String| FeatureError::ModelLoadFailure {
            path: path.to_path_buf(),
            reason,
        };
        let onnx = tract_onnx::onnx();
        let proto = onnx.proto_model_for_path(path).map_err(|e| fail(format!("{e:#}")))?;
        let graph = proto.graph.as_ref().ok_or_else(|| fail("model has no graph".into()))?;
        let layout = detect_layout(graph);
        let relu_outputs: Vec<String> = graph
            .node
            .iter()
            .filter(|n| n.op_type == "Relu")
            .filter_map(|n| n.output.first().cloned())
            .collect();

        let mut model = onnx.model_for_path(path).map_err(|e| fail(format!("{e:#}")))?;
        let shape: [usize; 4] = match layout {
            InputLayout::Nchw => [1, 3, INPUT_SIZE, INPUT_SIZE],
            InputLayout::Nhwc => [1, INPUT_SIZE, INPUT_SIZE, 3],
        };
        model
            .set_input_fact(0, f32::fact(shape).into())
            .map_err(|e| fail(format!("{e:#}")))?;
        let mut typed = model.into_typed().map_err(|e| fail(format!("{e:#}")))?;

        let width = |m: &TypedModel, o: OutletId| -> Option<usize> {
            m.outlet_fact(o)
                .ok()?
                .shape
                .as_concrete()
                .map(|dims| dims.iter().product())
        };

        let (outlet, name) = match layer {
            Some(name) => {
                let o = typed
                    .find_outlet_label(name)
                    .ok_or_else(|| fail(format!("no tensor named {name:?}")))?;
                (o, name.to_string())
            }
            None => relu_outputs
                .iter()
                .filter_map(|n| Some((typed.find_outlet_label(n)?, n.clone())))
                .find(|&(o, _)| width(&typed, o) == Some(FEATURE_DIM))
                .or_else(|| {
                    let o = *typed.output_outlets().ok()?.first()?;
                    let label = typed.outlet_label(o).unwrap_or("output").to_string();
                    Some((o, label))
                })
                .ok_or_else(|| fail("model has no outputs".into()))?,
        };
        let got = width(&typed, outlet).unwrap_or(0);
        if got != FEATURE_DIM {
            return Err(FeatureError::DimensionMismatch {
                expected: FEATURE_DIM,
                got,
            });
        }
        typed
            .select_output_outlets(&[outlet])
            .map_err(|e| fail(format!("{e:#}")))?;
        let plan = typed
            .into_optimized()
            .and_then(|m| m.into_runnable())
            .map_err(|e| fail(format!("{e:#}")))?;
        Ok(Self {
            plan,
            layout,
            preprocess,
            feature_layer: name,
        })
    }

    pub fn layout(&self) -> InputLayout {
        self.layout
    }

    /// Name of the tensor the features are read from.
    pub fn feature_layer(&self) -> &str {
        &self.feature_layer
    }

    /// Runs the network on an already-preprocessed 224x224x3 tensor.
    pub fn forward(&self, input: &ndarray::Array3<f32>) -> Result<Vec<f32>, FeatureError> {
        let hwc: Vec<f32> = input.iter().copied().collect();
        let tensor = match self.layout {
            InputLayout::Nhwc => Tensor::from_shape(&[1, INPUT_SIZE, INPUT_SIZE, 3], &hwc),
            InputLayout::Nchw => {
                let chw = input.view().permuted_axes([2, 0, 1]);
                let data: Vec<f32> = chw.iter().copied().collect();
                Tensor::from_shape(&[1, 3, INPUT_SIZE, INPUT_SIZE], &data)
            }
        }
        .map_err(|e| FeatureError::Inference(format!("{e:#}")))?;
        let out = self
            .plan
            .run(tvec!(tensor.into_tvalue()))
            .map_err(|e| FeatureError::Inference(format!("{e:#}")))?;
        let view = out[0]
            .to_plain_array_view::<f32>()
            .map_err(|e| FeatureError::Inference(format!("{e:#}")))?;
        Ok(view.iter().copied().collect())
    }

    pub fn extract(&self, id: &str, img: &ImageBuffer) -> Result<FeatureVector, FeatureError> {
        let input = preprocess(img, &self.preprocess)?;
        FeatureVector::new(id, self.forward(&input)?)
    }
}

fn detect_layout(graph: &pb::GraphProto) -> InputLayout {
    let initializers: Vec<&str> = graph.initializer.iter().map(|t| t.name.as_str()).collect();
    let dims: Vec<Option<i64>> = graph
        .input
        .iter()
        .find(|i| !initializers.contains(&i.name.as_str()))
        .and_then(|i| i.r#type.as_ref())
        .and_then(|t| t.value.as_ref())
        .map(|v| {
            let pb::type_proto::Value::TensorType(t) = v;
            t.shape
                .as_ref()
                .map(|s| {
                    s.dim
                        .iter()
                        .map(|d| match d.value {
                            Some(pb::tensor_shape_proto::dimension::Value::DimValue(v)) => Some(v),
                            _ => None,
                        })
                        .collect()
                })
                .unwrap_or_default()
        })
        .unwrap_or_default();
    if dims.len() == 4 && dims[3] == Some(3) && dims[1] != Some(3) {
        InputLayout::Nhwc
    } else {
        InputLayout::Nchw
    }
}
