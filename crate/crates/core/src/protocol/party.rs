use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSampler};
use crate::linalg::FieldVector;
use crate::membership::Outcome;

use super::{
    p1_round2, p2_output, p2_round1, Msg1, Msg2, P1Reply, P2View, SetupP1, SetupP2, ValidMsg2,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    AwaitSetup,
    AwaitMsg,
    Done,
    Aborted,
}

#[derive(Debug, Clone)]
enum P1State {
    AwaitSetup,
    AwaitMsg(SetupP1),
    Done(FieldElement),
    Aborted,
}

/// P1, holding `x̄`.
#[derive(Debug, Clone)]
pub struct Party1 {
    x: FieldVector,
    state: P1State,
}

impl Party1 {
    pub fn new(x: FieldVector) -> Self {
        Party1 {
            x,
            state: P1State::AwaitSetup,
        }
    }

    pub fn phase(&self) -> Phase {
        match self.state {
            P1State::AwaitSetup => Phase::AwaitSetup,
            P1State::AwaitMsg(_) => Phase::AwaitMsg,
            P1State::Done(_) => Phase::Done,
            P1State::Aborted => Phase::Aborted,
        }
    }

    pub fn receive_setup(&mut self, setup: SetupP1) -> Result<()> {
        if !matches!(self.state, P1State::AwaitSetup) {
            return Err(Error::UnexpectedState("P1 already has its setup"));
        }
        if setup.x0.len() != self.x.len() || setup.x0.modulus() != self.x.modulus() {
            return Err(Error::DimensionMismatch(
                "P1 setup does not match its input".into(),
            ));
        }
        self.state = P1State::AwaitMsg(setup);
        Ok(())
    }

    /// Handles `ȳ₁`. Returns the reply to send, or `None` after aborting.
    pub fn receive_msg1<S: FieldSampler + ?Sized>(
        &mut self,
        msg: &Msg1,
        rng: &mut S,
    ) -> Result<Option<Msg2>> {
        let P1State::AwaitMsg(setup) = &self.state else {
            return Err(Error::UnexpectedState("P1 is not waiting for a message"));
        };
        match p1_round2(&self.x, setup, msg, rng)? {
            P1Reply::Send { msg2, w1 } => {
                self.state = P1State::Done(w1);
                Ok(Some(msg2))
            }
            P1Reply::Abort => {
                self.state = P1State::Aborted;
                Ok(None)
            }
        }
    }

    pub fn outcome(&self) -> Option<Outcome> {
        match self.state {
            P1State::Done(w1) => Some(Outcome::Share(w1)),
            P1State::Aborted => Some(Outcome::Abort),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
enum P2State {
    AwaitSetup,
    AwaitMsg(SetupP2),
    Done {
        setup: SetupP2,
        msg: ValidMsg2,
        w2: FieldElement,
    },
    Aborted,
}

/// P2, holding `ȳ`.
#[derive(Debug, Clone)]
pub struct Party2 {
    y: FieldVector,
    state: P2State,
}

impl Party2 {
    pub fn new(y: FieldVector) -> Self {
        Party2 {
            y,
            state: P2State::AwaitSetup,
        }
    }

    pub fn phase(&self) -> Phase {
        match self.state {
            P2State::AwaitSetup => Phase::AwaitSetup,
            P2State::AwaitMsg(_) => Phase::AwaitMsg,
            P2State::Done { .. } => Phase::Done,
            P2State::Aborted => Phase::Aborted,
        }
    }

    /// Stores the setup and returns the first message `ȳ₁`.
    pub fn receive_setup(&mut self, setup: SetupP2) -> Result<Msg1> {
        if !matches!(self.state, P2State::AwaitSetup) {
            return Err(Error::UnexpectedState("P2 already has its setup"));
        }
        let msg = p2_round1(&self.y, &setup)?;
        self.state = P2State::AwaitMsg(setup);
        Ok(msg)
    }

    pub fn receive_msg2(&mut self, msg: &Msg2) -> Result<Outcome> {
        let P2State::AwaitMsg(setup) = &self.state else {
            return Err(Error::UnexpectedState("P2 is not waiting for a message"));
        };
        match msg.validate(setup.y0.len(), setup.y0.modulus()) {
            Some(valid) => {
                let w2 = p2_output(setup, &valid);
                self.state = P2State::Done {
                    setup: setup.clone(),
                    msg: valid,
                    w2,
                };
                Ok(Outcome::Share(w2))
            }
            None => {
                self.state = P2State::Aborted;
                Ok(Outcome::Abort)
            }
        }
    }

    pub fn outcome(&self) -> Option<Outcome> {
        match &self.state {
            P2State::Done { w2, .. } => Some(Outcome::Share(*w2)),
            P2State::Aborted => Some(Outcome::Abort),
            _ => None,
        }
    }

    /// Everything P2 holds after a completed session.
    pub fn view(&self) -> Option<P2View> {
        let P2State::Done { setup, msg, w2 } = &self.state else {
            return None;
        };
        Some(P2View {
            y: self.y.clone(),
            y0: setup.y0.clone(),
            s0: setup.s0,
            x1: msg.x1.clone(),
            r1: msg.r1,
            w2: *w2,
        })
    }
}
