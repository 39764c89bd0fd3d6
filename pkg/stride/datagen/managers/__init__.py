from stride.datagen.managers.base import GeneratorClient
from stride.datagen.managers.chat import ChatCompletionManager
from stride.datagen.managers.scripted import ScriptedGenerator, load_script

__all__ = [
    'GeneratorClient', 'ChatCompletionManager', 'ScriptedGenerator',
    'load_script']
