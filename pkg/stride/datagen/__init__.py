from stride.datagen.builders import (
    ConstructionBuilder, harvest_model_errors, merge_wrong_cases, run_stage1,
    run_stage2)
from stride.datagen.datasets import emit_datasets, load_problems
from stride.datagen.managers import (
    ChatCompletionManager, GeneratorClient, ScriptedGenerator, load_script)
from stride.datagen.models import (
    ConstructionCase, DatasetManifest, GeneratorConfig, PreferencePair,
    ProblemInstance)

__all__ = [
    'ConstructionBuilder', 'harvest_model_errors', 'merge_wrong_cases',
    'run_stage1', 'run_stage2', 'emit_datasets', 'load_problems',
    'ChatCompletionManager', 'GeneratorClient', 'ScriptedGenerator',
    'load_script', 'ConstructionCase', 'DatasetManifest', 'GeneratorConfig',
    'PreferencePair', 'ProblemInstance']
