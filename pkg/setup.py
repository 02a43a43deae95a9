from setuptools import setup, find_packages

setup(
    name='StripHomology',
    version='0.1.0',
    packages=find_packages(exclude=['tests', 'examples', 'examples.*']),
    package_data={'strip_homology': ['schemas/*.json', 'verify_policy.json']},
    include_package_data=True,
    description='StripHomology - Homology, barcodes and Betti growth of disk configurations in a strip',
    python_requires='>=3.9',
    install_requires=[
        'pydantic~=2.7.1',
        'jsonschema~=4.22.0',
        'python-dotenv~=1.0.1',
        'typing-extensions>=4.11.0',
        'sympy~=1.12',
        'networkx~=3.2',
        'matplotlib~=3.8',
        'tqdm~=4.66',
    ],
    entry_points={
        'console_scripts': ['strip-homology=strip_homology.cli:main'],
    },
    license='MIT',
)
