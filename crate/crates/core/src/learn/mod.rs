//! Trainable components: naive Bayes, standardization, linear SVM and
//! probability calibration.

mod calibrate;
mod nb;
mod scaler;
mod svm;

pub use calibrate::Calibrator;
pub use nb::NbModel;
pub use scaler::Scaler;
pub use svm::{LinearSvm, SvmParams};
