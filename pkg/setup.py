from setuptools import setup, find_packages


with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="viewkernel",
    version="0.1.0",
    author="Son Pham, Tien Nguyen, Bao Bach",
    author_email="reachphamhson@gmail.com",
    description="Contextual Weisfeiler-Lehman graph kernels, multiple kernel learning and malicious code "
                "localization for multi-view program graphs",
    long_description=long_description,
    long_description_content_type="text/markdown",
    license='MIT License',
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
    ],
    packages=find_packages(include=["src", "src.*"]),
    install_requires=["numpy", "scipy", "pandas>=1.5", "scikit-learn", "networkx", "joblib", "PyYAML",
                      "python-json-logger"],
    entry_points={"console_scripts": ["viewkernel = src.cli.main:main"]},
    python_requires=">=3.8"
)
