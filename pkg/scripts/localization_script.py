from src.cwlk.config import CwlConfig
from src.localize.mscore import interpret_dataset
from src.mkl.mkl import MklConfig
from src.pipeline import train_model
from src.run_log import configure_logging
from src.synth.evaluation import evaluate
from src.synth.generator import generate, load_gen_config

'''
Simple example of training and localization on synthetic apps
'''
configure_logging("INFO")

"""
Generate samples with planted leak and dropper classes
"""
cfg = load_gen_config("experiments/localization.yaml")
dataset = generate(cfg)
train, test = dataset.subset(range(200)), dataset.subset(range(200, len(dataset)))

"""
Learn per view kernel weights
"""
model = train_model(train, CwlConfig(h=2, compress=True), MklConfig(C=100.), k_select=5000)
print(model.normalized_betas())
print("-------------")

"""
Rank the classes of every test sample
"""
reports = interpret_dataset(test, model)
for report in reports[:5]:
    print(report.sample_id, report.prediction, report.top_classes(3))
print("-------------")
predictions = {report.sample_id: report.prediction for report in reports}
print(evaluate(predictions, reports, test, k=10).to_frame().T)
