from setuptools import setup


dependencies = [
    "numpy>=1.17",  # Dense Hermitian linear algebra
    "scipy>=1.4",  # Gamma function, BFGS for the distance oracle, graph components, pairwise distances
    "colorlog==4.2.1",  # Adds color to logs
    "concurrent-log-handler==0.9.16",  # Concurrently log and rotate logs
    "PyYAML>=5.3.1",  # Used for config file format
]

dev_dependencies = [
    "pytest",
    "flake8",
    "mypy",
    "black",
]

kwargs = dict(
    name="pointforge",
    description="Point clouds, Connes distances and embeddings from truncated spectral triples.",
    license="Apache License",
    python_requires=">=3.7, <4",
    keywords="spectral triple connes distance semidefinite smacof",
    install_requires=dependencies,
    setup_requires=["setuptools_scm"],
    extras_require=dict(dev=dev_dependencies),
    packages=[
        "src",
        "src.cmds",
        "src.spectral",
        "src.types",
        "src.util",
    ],
    entry_points={
        "console_scripts": [
            "pointforge = src.cmds.pointforge:main",
        ]
    },
    package_data={
        "src.util": ["initial-*.yaml"],
    },
    use_scm_version={"fallback_version": "unknown-no-.git-directory"},
    long_description=open("README.md").read(),
    zip_safe=False,
)


if __name__ == "__main__":
    setup(**kwargs)
