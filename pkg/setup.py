import os
import re

from setuptools import setup, find_packages

here = os.path.abspath(os.path.dirname(__file__))
with open(os.path.join(here, 'README.rst')) as f:
    README = f.read()

with open(os.path.join(here, 'requirements.txt')) as f:
    requires = [line.strip() for line in f if line.strip()]

with open(os.path.join(here, 'requirements-dev.txt')) as f:
    requires_dev = [line.strip() for line in f if line.strip()]


def get_version(package):
    """
    Return package version as listed in `__version__` in `init.py`.
    """
    init_py = open(os.path.join(package, '__init__.py')).read()
    return re.search("__version__ = ['\"]([^'\"]+)['\"]", init_py).group(1)


version = get_version('stride')

setup(
    name='stride',
    version=version,
    description=(
        'State-transition reasoning traces for math word problems: '
        'validation, two-stage data construction, loss checks and scoring'),
    long_description=README,
    classifiers=[
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
    ],
    author='Praekelt Foundation',
    author_email='dev@praekelt.com',
    license='BSD',
    packages=find_packages(exclude=['examples', 'examples.*']),
    include_package_data=True,
    package_data={'stride.datagen': ['templates/*.txt']},
    zip_safe=False,
    python_requires='>=3.7',
    install_requires=requires,
    tests_require=requires_dev,
    entry_points={
        'console_scripts': ['stride = stride.cli:main'],
    },
)
