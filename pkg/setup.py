from setuptools import setup, find_packages

setup(
    name="pyLaneRGBD",
    version="0.1.0",
    description="RGB-D lane marker detection toolbench with synthetic road scenes",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    install_requires=[
        "numpy",
        "scipy",
    ],
    extras_require={
        'dev': [
            'pytest',
            'black',
            'flake8',
        ],
    },
    entry_points={
        'console_scripts': [
            'lanergbd=pyLaneRGBD.harness.cli:main',
        ],
    },
    python_requires=">=3.9",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Topic :: Scientific/Engineering :: Image Recognition",
    ],
    keywords="lane detection, RGB-D, template matching, surface normals, plane fitting",
)
