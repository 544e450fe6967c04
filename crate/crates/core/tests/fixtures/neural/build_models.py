"""Builds the tiny ONNX models used by the neural backend tests and freezes
expected features with onnxruntime.

    python3 build_models.py

Writes:
  tiny_vgg.onnx        NCHW input, Relu(Gemm) feature layer 4096 wide
  narrow.onnx          no 4096-wide layer anywhere
  probe.png            96x72 RGB input image
  expected.json        onnxruntime features for probe.png (RGB, VGG means)
"""

import json
from pathlib import Path

import cv2
import numpy as np
import onnx
import onnxruntime as ort
import torch
from PIL import Image
from torch import nn

HERE = Path(__file__).resolve().parent
MEANS = np.array([123.68, 116.779, 103.939])


class TinyVgg(nn.Module):
    def __init__(self, width):
        super().__init__()
        self.features = nn.Sequential(
            nn.Conv2d(3, 4, 3, stride=4, padding=1), nn.ReLU(), nn.MaxPool2d(28)
        )
        self.fc = nn.Linear(16, width)
        self.act = nn.ReLU()
        self.head = nn.Linear(width, 2)

    def forward(self, x):
        x = torch.flatten(self.features(x), 1)
        return self.head(self.act(self.fc(x)))


def export(model, path):
    model.eval()
    dummy = torch.zeros(1, 3, 224, 224)
    torch.onnx.export(model, dummy, path, input_names=["input"], output_names=["logits"],
                      opset_version=13, dynamo=False)


def probe_image():
    y, x = np.mgrid[0:72, 0:96]
    r = (x * 255 / 95).round()
    g = (y * 255 / 71).round()
    b = ((x + y) % 32) * 8
    return np.stack([r, g, b], axis=-1).astype(np.uint8)


def preprocess(rgb_u8):
    small = cv2.resize(rgb_u8.astype(np.float64), (224, 224), interpolation=cv2.INTER_LINEAR)
    x = (small - MEANS).astype(np.float32)
    return np.ascontiguousarray(x.transpose(2, 0, 1)[None])


def main():
    torch.manual_seed(7)
    tiny = TinyVgg(4096)
    with torch.no_grad():
        tiny.fc.weight.normal_(0.0, 0.05)
        tiny.fc.bias.uniform_(0.0, 0.5)
    export(tiny, HERE / "tiny_vgg.onnx")
    torch.manual_seed(8)
    export(TinyVgg(10), HERE / "narrow.onnx")

    img = probe_image()
    Image.fromarray(img, mode="RGB").save(HERE / "probe.png")

    # expose the 4096-wide Relu output
    m = onnx.load(str(HERE / "tiny_vgg.onnx"))
    relu_out = [n.output[0] for n in m.graph.node if n.op_type == "Relu"][-1]
    m.graph.output.append(onnx.helper.make_tensor_value_info(relu_out, onnx.TensorProto.FLOAT, None))
    sess = ort.InferenceSession(m.SerializeToString())
    feats = sess.run([relu_out], {"input": preprocess(img)})[0].ravel()
    assert feats.size == 4096 and np.count_nonzero(feats) > 100
    with open(HERE / "expected.json", "w") as f:
        json.dump({"layer": relu_out, "features": [float(v) for v in feats]}, f)
        f.write("\n")


if __name__ == "__main__":
    main()
