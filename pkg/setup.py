import setuptools
import os
from pathlib import Path

root = Path(os.path.realpath(__file__)).parent
version_file = root / "src" / "killingbeck" / "VERSION"
readme_file = root / "readme_pypi.rst"

setuptools.setup(
    name="killingbeck-pspin",
    version=version_file.read_text().strip(),
    license="MIT",
    description="Dirac bound states of the Killingbeck potential "
                "under pseudospin symmetry.",
    keywords="dirac pseudospin killingbeck quasi-exact shooting",
    long_description=readme_file.read_text(),
    long_description_content_type="text/x-rst",

    packages=setuptools.find_packages(where="src"),
    package_dir={"": "src"},
    package_data={"killingbeck": ["VERSION", "data/*.csv"]},
    include_package_data=True,
    entry_points={
        "console_scripts": ["killingbeck = killingbeck.cli:main"],
    },

    python_requires=">=3.7",
    install_requires=[
        "numpy>=1.17",
        "scipy>=1.6",
    ],
    # Keep extras in sync with requirements manually
    extras_require={
        "numba": ["numba"],
        "tests": ["pytest", "coverage"],
        "checks": ["flake8", "flake8-bugbear", "doc8", "pydocstyle"],
        "docs": [
            "sphinx",
            "sphinx-rtd-theme",
            "sphinx-codeautolink",
        ],
    },

    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3 :: Only',
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Topic :: Scientific/Engineering :: Physics',
    ],
)
